//! Shared numerics: adaptive quadrature, finite differences, Kolmogorov–Smirnov
//! tests and Monte Carlo summaries.

mod finite_diff;
mod ks;
mod moments;
mod quadrature;

pub use finite_diff::{central_difference, finite_diff, finite_diff_with_eval_err, FiniteDiff};
pub use ks::{kolmogorov_q, ks_one_sample, ks_two_sample, KsResult};
pub use moments::{mc_mean_se, ratio_mean_se, MeanSe};
pub use quadrature::{integrate, integrate_with, Domain, QuadOptions, QuadratureResult};

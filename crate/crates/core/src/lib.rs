//! Numerical and Monte Carlo verification of identities in law for powers of
//! Gamma variables, exponential functionals of Lévy processes and
//! generalized Gamma convolutions.
//!
//! The analytic layers (`specfun`, `stats` quadrature and finite differences,
//! `levy_core`, `ggc_analytics`) are generic over [`Real`]; the aliases below
//! fix the scalar for the common cases.

// `!(x > 0.0)` is the NaN-rejecting form used throughout for domain checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Series coefficients are kept as published, past f64 precision.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod expfun_sim;
pub mod ggc_analytics;
pub mod identity_suite;
pub mod levy_core;
pub mod samplers;
pub mod scalar;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Real;

pub type FrechetParams = levy_core::FrechetParams<f64>;
pub type FrechetParams32 = levy_core::FrechetParams<f32>;
pub type LevyExponent = levy_core::LevyExponentSpec<f64>;
pub type LevyExponent32 = levy_core::LevyExponentSpec<f32>;
pub type CmProbeReport = ggc_analytics::CMProbeReport<f64>;
pub type QuadratureResult = stats::QuadratureResult<f64>;
pub type QuadOptions = stats::QuadOptions<f64>;
pub type SpecFunResult = specfun::SpecFunResult<f64>;

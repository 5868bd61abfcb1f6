//! Real-order special functions: log-gamma, Gamma ratios, the regularized
//! incomplete Gamma function and Bessel functions `J`, `Y`, `K`.

mod bessel;
mod gamma;

pub use bessel::{
    bessel_jy, bessel_k, bessel_k_scaled, bessel_modulus_sq, macdonald_ratio, BesselJY,
};
pub use gamma::{gamma_ratio, ln_gamma, regularized_gamma_p, regularized_gamma_q};

use crate::scalar::Real;

/// Euler–Mascheroni constant to 20 significant digits.
pub const EULER_GAMMA_LITERAL: f64 = 0.577_215_664_901_532_860_61;

pub fn euler_gamma<T: Real>() -> T {
    T::lit(EULER_GAMMA_LITERAL)
}

/// A special-function value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult<T> {
    pub value: T,
    pub est_abs_err: T,
}

impl<T: Real> SpecFunResult<T> {
    pub(crate) fn with_rel_err(value: T, rel: T) -> Self {
        Self {
            value,
            est_abs_err: value.abs() * rel,
        }
    }
}

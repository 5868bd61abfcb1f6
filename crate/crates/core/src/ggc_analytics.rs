//! Laplace transforms of powers of Gamma variables, Thorin-measure checks
//! and numerical probes of complete monotonicity.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::levy_core::compensated_exp_ratio;
use crate::scalar::Real;
use crate::specfun::{bessel_modulus_sq, euler_gamma, ln_gamma};
use crate::stats::{finite_diff_with_eval_err, integrate_with, Domain, QuadOptions};

fn opts<T: Real>(tol: T) -> Result<QuadOptions<T>> {
    if !(tol > T::zero()) {
        return domain(
            "ggc_analytics",
            format!("tolerance must be positive, got {tol}"),
        );
    }
    Ok(QuadOptions {
        abs_tol: T::min_positive_value(),
        rel_tol: tol,
        max_subdivisions: 4000,
    })
}

/// `E[g(Γ_t)]` by quadrature. For `t < 1` the substitution `w = x^t` removes
/// the singular weight.
pub fn gamma_expectation<T, G>(t: T, g: G, tol: T) -> Result<T>
where
    T: Real,
    G: Fn(T) -> T,
{
    if !(t > T::zero()) || !t.is_finite() {
        return domain("gamma_expectation", format!("t must be positive, got {t}"));
    }
    let o = opts(tol)?;
    if t >= T::one() {
        let norm = ln_gamma(t)?;
        let tm1 = t - T::one();
        let r = integrate_with(
            |x: T| {
                let w = if x == T::zero() {
                    if tm1 == T::zero() {
                        T::one()
                    } else {
                        T::zero()
                    }
                } else {
                    (tm1 * x.ln() - x - norm).exp()
                };
                if w == T::zero() {
                    T::zero()
                } else {
                    w * g(x)
                }
            },
            Domain::SemiInfinite(T::zero()),
            &o,
        )?;
        Ok(r.value)
    } else {
        let norm = ln_gamma(t + T::one())?.neg().exp();
        let inv_t = t.recip();
        let r = integrate_with(
            |w: T| {
                let x = w.powf(inv_t);
                let weight = (-x).exp();
                if weight == T::zero() {
                    T::zero()
                } else {
                    weight * g(x)
                }
            },
            Domain::SemiInfinite(T::zero()),
            &o,
        )?;
        Ok(norm * r.value)
    }
}

fn check_power<T: Real>(func: &'static str, xi: T, t: T) -> Result<()> {
    if xi == T::zero() || !xi.is_finite() {
        return domain(func, format!("xi must be non-zero and finite, got {xi}"));
    }
    if !(t > T::zero()) || !t.is_finite() {
        return domain(func, format!("t must be positive, got {t}"));
    }
    Ok(())
}

/// `x^ξ` with the limits at `x = 0`.
fn power<T: Real>(x: T, xi: T) -> T {
    if x == T::zero() {
        if xi > T::zero() {
            T::zero()
        } else {
            T::infinity()
        }
    } else {
        x.powf(xi)
    }
}

/// `e^{-λ x}` with `0 · ∞ = 0`.
fn damp<T: Real>(lambda: T, x: T) -> T {
    if lambda == T::zero() {
        T::one()
    } else {
        (-lambda * x).exp()
    }
}

/// `E[e^{-λ Γ_t^ξ}]`.
pub fn laplace_gamma_power<T: Real>(xi: T, t: T, lambda: T, tol: T) -> Result<T> {
    check_power("laplace_gamma_power", xi, t)?;
    if !(lambda >= T::zero()) || !lambda.is_finite() {
        return domain(
            "laplace_gamma_power",
            format!("lambda must be non-negative, got {lambda}"),
        );
    }
    if lambda == T::zero() {
        return Ok(T::one());
    }
    gamma_expectation(t, |x| damp(lambda, power(x, xi)), tol)
}

/// `-(d/dλ) log E[e^{-λ Γ_t^ξ}] = E[X e^{-λX}] / E[e^{-λX}]` with `X = Γ_t^ξ`.
pub fn laplace_exponent_derivative<T: Real>(xi: T, t: T, lambda: T, tol: T) -> Result<T> {
    check_power("laplace_exponent_derivative", xi, t)?;
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return domain(
            "laplace_exponent_derivative",
            format!("lambda must be positive, got {lambda}"),
        );
    }
    let num = gamma_expectation(
        t,
        |x| {
            let p = power(x, xi);
            let d = damp(lambda, p);
            if d == T::zero() {
                T::zero()
            } else {
                p * d
            }
        },
        tol,
    )?;
    let den = gamma_expectation(t, |x| damp(lambda, power(x, xi)), tol)?;
    Ok(num / den)
}

/// `φ_t'(λ)` for `φ_t(λ) = -log E[e^{-λ/(4Γ_t)}]`, differentiated under the integral.
pub fn phi_prime<T: Real>(t: T, lambda: T, tol: T) -> Result<T> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return domain(
            "phi_prime",
            format!("lambda must be positive, got {lambda}"),
        );
    }
    laplace_exponent_derivative(-T::one(), t, lambda / T::lit(4.0), tol).map(|v| v / T::lit(4.0))
}

/// Density of the Thorin measure of `1/(4Γ_t)`: `1/(π² x (J_t² + Y_t²)(√x))`.
pub fn thorin_density<T: Real>(t: T, x: T) -> Result<T> {
    if !(t > T::zero()) {
        return domain("thorin_density", format!("t must be positive, got {t}"));
    }
    if !(x > T::zero()) || !x.is_finite() {
        return domain("thorin_density", format!("x must be positive, got {x}"));
    }
    let m2 = bessel_modulus_sq(t, x.sqrt())?;
    Ok(T::one() / (T::PI() * T::PI() * x * m2))
}

/// `∫₀^∞ U_t(x)/(λ + x) dx`, integrated in `z = √x`.
pub fn stieltjes_of_thorin<T: Real>(t: T, lambda: T, tol: T) -> Result<T> {
    if !(t > T::zero()) {
        return domain(
            "stieltjes_of_thorin",
            format!("t must be positive, got {t}"),
        );
    }
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return domain(
            "stieltjes_of_thorin",
            format!("lambda must be positive, got {lambda}"),
        );
    }
    let o = opts(tol)?;
    let pi2 = T::PI() * T::PI();
    let two = T::lit(2.0);
    let r = integrate_with(
        |z: T| {
            if z == T::zero() {
                return T::zero();
            }
            match bessel_modulus_sq(t, z) {
                Ok(m2) if m2.is_finite() => two / (pi2 * z * m2 * (lambda + z * z)),
                // Y_t(z)² overflows as z → 0, where the integrand vanishes.
                _ => T::zero(),
            }
        },
        Domain::SemiInfinite(T::zero()),
        &o,
    )?;
    Ok(r.value)
}

/// `(log Γ(1+λ), -γλ + ∫₀^∞ (e^{-λx} - 1 + λx) dx / (x(e^x - 1)))`.
pub fn gumbel_lk_check<T: Real>(lambda: T, tol: T) -> Result<(T, T)> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return domain(
            "gumbel_lk_check",
            format!("lambda must be positive, got {lambda}"),
        );
    }
    let o = QuadOptions {
        abs_tol: tol * T::lit(0.01),
        rel_tol: tol * T::lit(0.01),
        max_subdivisions: 4000,
    };
    let r = integrate_with(
        |x: T| {
            if x == T::zero() {
                return lambda * lambda / T::lit(2.0);
            }
            let em1 = x.exp_m1();
            if !em1.is_finite() {
                return T::zero();
            }
            lambda * lambda * x * compensated_exp_ratio(-lambda * x) / em1
        },
        Domain::SemiInfinite(T::zero()),
        &o,
    )?;
    let lhs = ln_gamma(T::one() + lambda)?;
    Ok((lhs, r.value - euler_gamma::<T>() * lambda))
}

/// Step selection for [`cm_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRule<T> {
    /// Relative accuracy of each evaluation of the probed function.
    pub rel_eval_err: T,
    /// Number of halvings tried below the largest admissible step.
    pub halvings: usize,
}

impl<T: Real> Default for StepRule<T> {
    fn default() -> Self {
        Self {
            rel_eval_err: T::lit(4.0) * T::epsilon(),
            halvings: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmViolation<T> {
    pub order: usize,
    pub lambda: T,
    /// `(-1)^k f^{(k)}(λ)`, negative.
    pub magnitude: T,
    /// Noise estimate at this point; `|magnitude|` exceeds it.
    pub noise_floor: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMProbeReport<T> {
    pub orders_checked: usize,
    pub grid: Vec<T>,
    pub violations: Vec<CmViolation<T>>,
    /// Largest noise estimate among flagged points, or over the whole probe
    /// when nothing was flagged. Every reported violation exceeds it.
    pub noise_floor: T,
}

/// Sign test of `(-1)^k f^{(k)}(λ) >= 0` for `k = 1..=max_order` on `grid`.
///
/// At each point the step is chosen among successive halvings of the largest
/// stencil that stays on the positive axis, minimising the combined noise
/// estimate. A point is flagged when the signed derivative falls below minus
/// its own noise estimate.
pub fn cm_probe<T, F>(
    f: F,
    grid: &[T],
    max_order: usize,
    rule: &StepRule<T>,
) -> Result<CMProbeReport<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if max_order == 0 || max_order > 6 {
        return domain(
            "cm_probe",
            format!("max_order must be in 1..=6, got {max_order}"),
        );
    }
    if grid.iter().any(|&l| !(l > T::zero()) || !l.is_finite()) {
        return domain("cm_probe", "grid points must be positive and finite");
    }
    let mut violations = Vec::new();
    let mut probe_floor = T::zero();
    for &lambda in grid {
        for k in 1..=max_order {
            let cap = T::lit(0.95 * 2.0 / k as f64) * lambda;
            let cap = cap.min(T::lit(0.5) * lambda.max(T::one()));
            let mut best = None;
            let mut h = cap;
            for _ in 0..=rule.halvings {
                let d = finite_diff_with_eval_err(&f, lambda, k, h, rule.rel_eval_err)?;
                if d.value.is_finite()
                    && best
                        .as_ref()
                        .is_none_or(|b: &crate::stats::FiniteDiff<T>| d.noise_floor < b.noise_floor)
                {
                    best = Some(d);
                }
                h = h / T::lit(2.0);
            }
            let Some(best) = best else { continue };
            let signed = if k % 2 == 0 { best.value } else { -best.value };
            probe_floor = probe_floor.max(best.noise_floor);
            if signed < -best.noise_floor {
                violations.push(CmViolation {
                    order: k,
                    lambda,
                    magnitude: signed,
                    noise_floor: best.noise_floor,
                });
            }
        }
    }
    let flagged_floor = violations
        .iter()
        .fold(T::zero(), |m: T, v: &CmViolation<T>| m.max(v.noise_floor));
    let noise_floor = if violations.is_empty() {
        probe_floor
    } else {
        flagged_floor
    };
    // keep only what also clears the reported level
    let violations = violations
        .into_iter()
        .filter(|v| -v.magnitude > noise_floor)
        .collect();
    Ok(CMProbeReport {
        orders_checked: max_order,
        grid: grid.to_vec(),
        violations,
        noise_floor,
    })
}

/// Probe of `-(d/dλ) log E[e^{-λ Γ_t^ξ}]`. For `ξ < -1` this is exploratory:
/// nothing is asserted about the outcome.
pub fn cm_probe_gamma_power<T: Real>(
    xi: T,
    t: T,
    grid: &[T],
    max_order: usize,
    tol: T,
) -> Result<CMProbeReport<T>> {
    check_power("cm_probe_gamma_power", xi, t)?;
    // evaluation failures surface as NaN and are skipped by the probe
    let f = |l: T| laplace_exponent_derivative(xi, t, l, tol).unwrap_or(T::nan());
    cm_probe(
        f,
        grid,
        max_order,
        &StepRule {
            rel_eval_err: tol * T::lit(4.0),
            halvings: 10,
        },
    )
}

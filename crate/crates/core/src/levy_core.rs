//! Lévy-Khintchine exponents of the spectrally negative processes whose
//! exponential functionals are powers of Gamma and positive stable variables.
//!
//! For `α ∈ (0,1)` and `t > 0` the exponent
//! `ψ(u) = u Γ(t + α(u+1)) / Γ(t + αu)` splits as
//! `m u + ∫_{-∞}^0 (e^{ux} - 1 - ux) f_{α,t}(x) dx` with `m = Γ(t+α)/Γ(t)`
//! and an explicit density `f_{α,t}`. The stable family uses
//! `ψ(u) = u(u+1) Γ(1+αu) / Γ(1+α(u+1))` with `m = 1/Γ(1+α)`.

use crate::error::{domain, Error, Result};
use crate::scalar::Real;
use crate::specfun::{gamma_ratio, ln_gamma};
use crate::stats::{integrate_with, Domain, QuadOptions};

/// Shape pair `(α, t)` with `α ∈ (0,1)`, `t > 0`; the extreme-value index is `ξ = -α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrechetParams<T> {
    alpha: T,
    t: T,
}

impl<T: Real> FrechetParams<T> {
    pub fn new(alpha: T, t: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return domain(
                "FrechetParams",
                format!("alpha must lie in (0,1), got {alpha}"),
            );
        }
        if !(t > T::zero()) || !t.is_finite() {
            return domain(
                "FrechetParams",
                format!("t must be positive and finite, got {t}"),
            );
        }
        Ok(Self { alpha, t })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn xi(&self) -> T {
        -self.alpha
    }

    /// `m = Γ(t+α)/Γ(t) = ψ'(0+)`.
    pub fn drift(&self) -> T {
        gamma_ratio(self.t + self.alpha, self.t).expect("validated parameters")
    }
}

fn check_negative<T: Real>(func: &'static str, x: T) -> Result<()> {
    if !(x < T::zero()) {
        return domain(func, format!("x must be negative, got {x}"));
    }
    Ok(())
}

/// `|x| / (1 - e^{x/α})` for `x <= 0`, equal to `α` at the origin.
fn scaled_gap<T: Real>(x: T, alpha: T) -> T {
    if x == T::zero() {
        return alpha;
    }
    -x / -(x / alpha).exp_m1()
}

/// `f_{α,t}(x) |x|^{α+2}`, bounded on `(-∞, 0]`.
fn frechet_density_regularized<T: Real>(p: &FrechetParams<T>, x: T) -> T {
    let (a, t) = (p.alpha, p.t);
    let e = (x / a).exp();
    let one_m = -(x / a).exp_m1();
    let gamma_1ma = ln_gamma(T::one() - a).expect("1 - alpha > 0").exp();
    let front = ((T::one() + t / a) * x).exp() * (a + e + t * one_m) / (a * gamma_1ma);
    front * scaled_gap(x, a).powf(a + T::lit(2.0))
}

/// Lévy density `f_{α,t}(x)` on `x < 0`.
pub fn levy_density<T: Real>(p: &FrechetParams<T>, x: T) -> Result<T> {
    check_negative("levy_density", x)?;
    Ok(frechet_density_regularized(p, x) * (-x).powf(-(p.alpha + T::lit(2.0))))
}

/// `ψ(u) = u Γ(t + α(u+1)) / Γ(t + αu)`, for `u` with `t + αu > 0`
/// (the analytic continuation to negative `u` is included).
pub fn psi_closed<T: Real>(p: &FrechetParams<T>, u: T) -> Result<T> {
    let (a, t) = (p.alpha, p.t);
    if !(t + a * u > T::zero()) || !u.is_finite() {
        return domain("psi_closed", format!("need t + alpha*u > 0, got u={u}"));
    }
    if u == T::zero() {
        return Ok(T::zero());
    }
    Ok(u * gamma_ratio(t + a * (u + T::one()), t + a * u)?)
}

/// `f(x)` for the stable family, `x < 0`.
pub fn patie_levy_density<T: Real>(alpha: T, x: T) -> Result<T> {
    check_alpha("patie_levy_density", alpha)?;
    check_negative("patie_levy_density", x)?;
    Ok(patie_density_regularized(alpha, x) * (-x).powf(-(T::lit(3.0) - alpha)))
}

fn check_alpha<T: Real>(func: &'static str, alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return domain(func, format!("alpha must lie in (0,1), got {alpha}"));
    }
    Ok(())
}

/// Stable-family density times `|x|^{3-α}`.
fn patie_density_regularized<T: Real>(alpha: T, x: T) -> T {
    let a = alpha;
    let e = (x / a).exp();
    let one_m = -(x / a).exp_m1();
    let gamma_1pa = ln_gamma(T::one() + a).expect("1 + alpha > 0").exp();
    let front = (T::one() - a) * e * ((T::lit(2.0) - a) * e + one_m) / (a * a * gamma_1pa);
    front * scaled_gap(x, a).powf(T::lit(3.0) - a)
}

/// `ψᴾ(u) = u(u+1) Γ(1+αu) / Γ(1+α(u+1))`, for `1 + αu > 0`.
pub fn patie_psi_closed<T: Real>(alpha: T, u: T) -> Result<T> {
    check_alpha("patie_psi_closed", alpha)?;
    if !(T::one() + alpha * u > T::zero()) || !u.is_finite() {
        return domain(
            "patie_psi_closed",
            format!("need 1 + alpha*u > 0, got u={u}"),
        );
    }
    if u == T::zero() {
        return Ok(T::zero());
    }
    Ok(u * (u + T::one()) * gamma_ratio(T::one() + alpha * u, T::one() + alpha * (u + T::one()))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ExponentKind {
    FrechetGamma,
    PatieStable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Family<T> {
    FrechetGamma(FrechetParams<T>),
    PatieStable { alpha: T },
}

/// A spectrally negative Lévy exponent `ψ(u) = m u + ∫ (e^{ux} - 1 - ux) f(x) dx`
/// with a known closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyExponentSpec<T> {
    family: Family<T>,
    drift_m: T,
}

impl<T: Real> LevyExponentSpec<T> {
    /// Exponent whose exponential functional is distributed as `Γ_t^{-α}`.
    pub fn frechet_gamma(p: FrechetParams<T>) -> Self {
        Self {
            family: Family::FrechetGamma(p),
            drift_m: p.drift(),
        }
    }

    /// Exponent whose exponential functional is distributed as `S_α^{-α}`.
    pub fn patie_stable(alpha: T) -> Result<Self> {
        check_alpha("LevyExponentSpec::patie_stable", alpha)?;
        Ok(Self {
            family: Family::PatieStable { alpha },
            drift_m: ln_gamma(T::one() + alpha)?.neg().exp(),
        })
    }

    pub fn kind(&self) -> ExponentKind {
        match self.family {
            Family::FrechetGamma(_) => ExponentKind::FrechetGamma,
            Family::PatieStable { .. } => ExponentKind::PatieStable,
        }
    }

    pub fn alpha(&self) -> T {
        match self.family {
            Family::FrechetGamma(p) => p.alpha,
            Family::PatieStable { alpha } => alpha,
        }
    }

    pub fn frechet_params(&self) -> Option<FrechetParams<T>> {
        match self.family {
            Family::FrechetGamma(p) => Some(p),
            Family::PatieStable { .. } => None,
        }
    }

    pub fn drift_m(&self) -> T {
        self.drift_m
    }

    pub fn density(&self, x: T) -> Result<T> {
        match self.family {
            Family::FrechetGamma(p) => levy_density(&p, x),
            Family::PatieStable { alpha } => patie_levy_density(alpha, x),
        }
    }

    /// Index `β ∈ (0,1)` of the origin singularity `f(x) ~ C |x|^{-2-β}`.
    pub fn singularity_index(&self) -> T {
        match self.family {
            Family::FrechetGamma(p) => p.alpha,
            Family::PatieStable { alpha } => T::one() - alpha,
        }
    }

    /// `f(x) |x|^{2+β}` on `x <= 0`; bounded, with a finite limit at 0.
    pub fn density_regularized(&self, x: T) -> T {
        match self.family {
            Family::FrechetGamma(p) => frechet_density_regularized(&p, x),
            Family::PatieStable { alpha } => patie_density_regularized(alpha, x),
        }
    }

    /// Rate `r` of the exponential decay `f(x) ~ C e^{r x}` as `x → -∞`.
    pub fn tail_rate(&self) -> T {
        match self.family {
            Family::FrechetGamma(p) => T::one() + p.t / p.alpha,
            Family::PatieStable { alpha } => T::one() / alpha,
        }
    }

    pub fn psi_closed(&self, u: T) -> Result<T> {
        match self.family {
            Family::FrechetGamma(p) => psi_closed(&p, u),
            Family::PatieStable { alpha } => patie_psi_closed(alpha, u),
        }
    }
}

/// `(e^y - 1 - y) / y^2` without cancellation.
pub(crate) fn compensated_exp_ratio<T: Real>(y: T) -> T {
    if y.abs() < T::lit(0.1) {
        // Σ_{k>=0} y^k / (k+2)!
        let mut term = T::lit(0.5);
        let mut sum = term;
        for k in 1..16 {
            term = term * y / T::from_usize_lossy(k + 2);
            sum = sum + term;
        }
        sum
    } else {
        (y.exp_m1() - y) / (y * y)
    }
}

/// Integrates `g(x) f(x)` over `(-∞, 0)` where `g(x) = x^2 h(x)` near the origin.
///
/// On `[-1, 0)` the substitution `x = -v^p`, `p = 1/(1-β)`, absorbs the
/// `|x|^{-β}` singularity left after dividing by `x^2`; `h` is supplied as
/// `g_over_x2`. The tail `(-∞, -1]` is integrated directly.
pub(crate) fn integrate_against_density<T, H, G>(
    spec: &LevyExponentSpec<T>,
    g_over_x2: H,
    g: G,
    opts: &QuadOptions<T>,
) -> Result<T>
where
    T: Real,
    H: Fn(T) -> T,
    G: Fn(T) -> T,
{
    let beta = spec.singularity_index();
    let p = T::one() / (T::one() - beta);
    let core = integrate_with(
        |v: T| {
            let x = -v.powf(p);
            p * g_over_x2(x) * spec.density_regularized(x)
        },
        Domain::Finite(T::zero(), T::one()),
        opts,
    )?;
    let tail = integrate_with(
        |s: T| {
            let x = -s;
            g(x) * spec.density_regularized(x) * s.powf(-(T::lit(2.0) + beta))
        },
        Domain::SemiInfinite(T::one()),
        opts,
    )?;
    Ok(core.value + tail.value)
}

/// `m u + ∫ (e^{ux} - 1 - ux) f(x) dx` by quadrature. The result is within
/// `tol (1 + |ψ(u)|)` of the closed form on the supported parameter range.
pub fn psi_integral<T: Real>(spec: &LevyExponentSpec<T>, u: T, tol: T) -> Result<T> {
    if !(tol > T::zero()) {
        return domain(
            "psi_integral",
            format!("tolerance must be positive, got {tol}"),
        );
    }
    if !(u >= T::zero()) || !u.is_finite() {
        return domain(
            "psi_integral",
            format!("u must be non-negative and finite, got {u}"),
        );
    }
    if u == T::zero() {
        return Ok(T::zero());
    }
    let opts = QuadOptions {
        abs_tol: tol * T::lit(0.1),
        rel_tol: tol * T::lit(0.1),
        max_subdivisions: 4000,
    };
    let jumps = integrate_against_density(
        spec,
        |x| u * u * compensated_exp_ratio(u * x),
        |x| (u * x).exp_m1() - u * x,
        &opts,
    )?;
    Ok(spec.drift_m * u + jumps)
}

/// `(Γ(t+αn)/Γ(t), m ψ(1)…ψ(n-1)/(n-1)!)`: the entire moments of `Γ_t^α`
/// computed directly and by the product recursion, both in log space.
pub fn gamma_power_moment<T: Real>(p: &FrechetParams<T>, n: usize) -> Result<(T, T)> {
    if n == 0 {
        return domain("gamma_power_moment", "order must be at least 1");
    }
    let nf = T::from_usize_lossy(n);
    let direct_log = ln_gamma(p.t + p.alpha * nf)? - ln_gamma(p.t)?;
    let mut rec_log = p.drift().ln() - ln_gamma(nf)?;
    for k in 1..n {
        rec_log = rec_log + psi_closed(p, T::from_usize_lossy(k))?.ln();
    }
    finish_moment("gamma_power_moment", direct_log, rec_log)
}

/// `(Γ(1+n)/Γ(1+αn), m ψᴾ(1)…ψᴾ(n-1)/(n-1)!)`: the moments `E[S_α^{nα}]`.
pub fn stable_power_moment<T: Real>(alpha: T, n: usize) -> Result<(T, T)> {
    check_alpha("stable_power_moment", alpha)?;
    if n == 0 {
        return domain("stable_power_moment", "order must be at least 1");
    }
    let nf = T::from_usize_lossy(n);
    let direct_log = ln_gamma(T::one() + nf)? - ln_gamma(T::one() + alpha * nf)?;
    let mut rec_log = -ln_gamma(T::one() + alpha)? - ln_gamma(nf)?;
    for k in 1..n {
        rec_log = rec_log + patie_psi_closed(alpha, T::from_usize_lossy(k))?.ln();
    }
    finish_moment("stable_power_moment", direct_log, rec_log)
}

fn finish_moment<T: Real>(func: &'static str, direct_log: T, rec_log: T) -> Result<(T, T)> {
    let direct = direct_log.exp();
    let recursive = rec_log.exp();
    if !direct.is_finite() || !recursive.is_finite() {
        return Err(Error::Overflow {
            func,
            msg: format!("log moments {direct_log} / {rec_log} exceed the scalar range"),
        });
    }
    Ok((direct, recursive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(a: f64, t: f64) -> FrechetParams<f64> {
        FrechetParams::new(a, t).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(FrechetParams::new(0.0, 1.0).is_err());
        assert!(FrechetParams::new(1.0, 1.0).is_err());
        assert!(FrechetParams::new(0.5, 0.0).is_err());
        assert!(FrechetParams::new(0.5, f64::NAN).is_err());
        let p = params(0.3, 2.0);
        assert_eq!(p.xi(), -0.3);
    }

    #[test]
    fn density_positive_and_domain_checked() {
        let p = params(0.5, 0.5);
        for &x in &[-1e-9, -1e-3, -0.5, -3.0, -40.0] {
            assert!(levy_density(&p, x).unwrap() > 0.0);
            assert!(patie_levy_density(0.5, x).unwrap() > 0.0);
        }
        assert!(levy_density(&p, 0.0).is_err());
        assert!(levy_density(&p, 1.0).is_err());
        assert!(patie_levy_density(0.5, 0.0).is_err());
    }

    #[test]
    fn density_origin_asymptotics() {
        let p = params(0.5, 0.5);
        let x = -1e-6_f64;
        let scaled = levy_density(&p, x).unwrap() * (-x).powf(2.5);
        assert_relative_eq!(scaled, 0.299_206_710_301_074_5, max_relative = 1e-4);
    }

    #[test]
    fn density_tail_asymptotics() {
        for &(a, t) in &[(0.5, 0.5), (0.2, 2.5), (0.8, 0.4)] {
            let p = params(a, t);
            let x = -30.0_f64;
            let ratio = levy_density(&p, x).unwrap() / ((1.0 + t / a) * x).exp();
            let gamma_1ma = ln_gamma(1.0 - a).unwrap().exp();
            assert_relative_eq!(ratio, (a + t) / (a * gamma_1ma), max_relative = 1e-3);
        }
    }

    #[test]
    fn psi_closed_examples() {
        let p = params(0.5, 0.5);
        assert_eq!(psi_closed(&p, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            psi_closed(&p, 1.0).unwrap(),
            0.886_226_925_452_758,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            psi_closed(&p, 2.0).unwrap(),
            2.256_758_334_191_025,
            max_relative = 1e-13
        );
        assert!(psi_closed(&p, -1.0).is_err());
        let q = params(0.5, 0.75);
        assert_relative_eq!(
            psi_closed(&q, -1.0).unwrap(),
            -0.337_989_120_033_642_4,
            max_relative = 1e-12
        );
    }

    #[test]
    fn patie_closed_examples() {
        assert_eq!(patie_psi_closed(0.5, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            patie_psi_closed(0.5, 1.0).unwrap(),
            1.772_453_850_905_516,
            max_relative = 1e-13
        );
        let spec = LevyExponentSpec::patie_stable(0.5).unwrap();
        assert_relative_eq!(
            spec.drift_m(),
            std::f64::consts::FRAC_2_SQRT_PI,
            max_relative = 1e-13
        );
        // m ψᴾ(1) = E[S^{2α}] = Γ(3)/Γ(2)
        assert_relative_eq!(
            spec.drift_m() * patie_psi_closed(0.5, 1.0).unwrap(),
            2.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn drift_is_derivative_at_zero() {
        for &(a, t) in &[(0.2, 0.4), (0.5, 1.0), (0.8, 2.5)] {
            let spec = LevyExponentSpec::frechet_gamma(params(a, t));
            let u = 1e-7;
            assert_relative_eq!(
                spec.psi_closed(u).unwrap() / u,
                spec.drift_m(),
                max_relative = 1e-5
            );
        }
        let spec = LevyExponentSpec::patie_stable(0.3).unwrap();
        assert_relative_eq!(
            spec.psi_closed(1e-7).unwrap() / 1e-7,
            spec.drift_m(),
            max_relative = 1e-5
        );
    }

    #[test]
    fn lemma_integral_example() {
        let spec = LevyExponentSpec::frechet_gamma(params(0.5, 0.5));
        let jumps = psi_integral(&spec, 1.0, 1e-10).unwrap() - spec.drift_m();
        assert_relative_eq!(jumps, 0.322_037_341_905_001_7, max_relative = 1e-8);
        let spec = LevyExponentSpec::patie_stable(0.5).unwrap();
        let jumps = psi_integral(&spec, 1.0, 1e-10).unwrap() - spec.drift_m();
        assert_relative_eq!(jumps, 0.644_074_683_810_003_5, max_relative = 1e-8);
    }

    #[test]
    fn psi_integral_examples() {
        let spec = LevyExponentSpec::frechet_gamma(params(0.5, 0.5));
        assert_eq!(psi_integral(&spec, 0.0, 1e-8).unwrap(), 0.0);
        assert!((psi_integral(&spec, 1.0, 1e-8).unwrap() - 0.886_226_925_452_758).abs() < 1e-6);
        let spec = LevyExponentSpec::frechet_gamma(params(0.3, 2.0));
        let closed = spec.psi_closed(3.0).unwrap();
        assert!((psi_integral(&spec, 3.0, 1e-8).unwrap() - closed).abs() < 1e-6 * (1.0 + closed));
        assert!(psi_integral(&spec, -1.0, 1e-8).is_err());
        assert!(psi_integral(&spec, 1.0, 0.0).is_err());
    }

    #[test]
    fn moment_examples() {
        let p = params(0.5, 0.5);
        let (d, r) = gamma_power_moment(&p, 1).unwrap();
        assert_relative_eq!(d, 0.564_189_583_547_756_3, max_relative = 1e-13);
        assert_relative_eq!(r, d, max_relative = 1e-13);
        let (d, r) = gamma_power_moment(&p, 2).unwrap();
        assert_relative_eq!(d, 0.5, max_relative = 1e-13);
        assert_relative_eq!(r, 0.5, max_relative = 1e-13);
        let (d, r) = gamma_power_moment(&p, 3).unwrap();
        assert_relative_eq!(d, 0.564_189_583_547_756_3, max_relative = 1e-13);
        assert_relative_eq!(r, d, max_relative = 1e-13);
        assert!(gamma_power_moment(&p, 0).is_err());
    }

    #[test]
    fn moment_overflow_is_reported() {
        let p = params(0.9, 1.0);
        assert!(matches!(
            gamma_power_moment(&p, 400),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn stable_moments_match_recursion() {
        for &a in &[0.2, 0.5, 0.8] {
            for n in 1..=8 {
                let (d, r) = stable_power_moment(a, n).unwrap();
                assert_relative_eq!(d, r, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn compensated_ratio_is_continuous() {
        for &y in &[-0.1_f64, 0.1] {
            let below = compensated_exp_ratio(y * (1.0 - 1e-12));
            let above = compensated_exp_ratio(y * (1.0 + 1e-12));
            assert_relative_eq!(below, above, max_relative = 1e-12);
        }
        assert_eq!(compensated_exp_ratio(0.0_f64), 0.5);
    }

    #[test]
    fn f32_closed_form() {
        let p = FrechetParams::new(0.5_f32, 0.5).unwrap();
        assert!((psi_closed(&p, 1.0).unwrap() - 0.886_226_9).abs() < 1e-5);
    }
}

use crate::error::{domain, Result};
use crate::scalar::Real;

/// A finite-difference derivative estimate with a combined rounding and
/// truncation noise estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDiff<T> {
    pub value: T,
    pub noise_floor: T,
}

const MAX_ORDER: usize = 6;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Plain central difference of the given order; returns the estimate and the
/// largest magnitude of `f` on the stencil.
pub fn central_difference<T, F>(f: &F, x: T, order: usize, step: T) -> (T, T)
where
    T: Real,
    F: Fn(T) -> T,
{
    let half = T::lit(order as f64 / 2.0);
    let mut acc = T::zero();
    let mut fmax = T::zero();
    for j in 0..=order {
        let node = x + (half - T::from_usize_lossy(j)) * step;
        let v = f(node);
        fmax = fmax.max(v.abs());
        let c = T::lit(binomial(order, j));
        acc = if j % 2 == 0 { acc + c * v } else { acc - c * v };
    }
    (acc / step.powi(order as i32), fmax)
}

/// Central finite difference of `f^{(order)}(x)` with the default assumption
/// that `f` is evaluated to a few ulps.
pub fn finite_diff<T, F>(f: F, x: T, order: usize, step: T) -> Result<FiniteDiff<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    finite_diff_with_eval_err(f, x, order, step, T::lit(4.0) * T::epsilon())
}

/// As [`finite_diff`], for an `f` whose evaluations carry relative error
/// `rel_eval_err` (for instance a quadrature tolerance).
///
/// The noise floor is the rounding amplification at steps `h` and `h/2` plus
/// a Richardson estimate of the `O(h^2)` truncation error.
pub fn finite_diff_with_eval_err<T, F>(
    f: F,
    x: T,
    order: usize,
    step: T,
    rel_eval_err: T,
) -> Result<FiniteDiff<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if order == 0 || order > MAX_ORDER {
        return domain(
            "finite_diff",
            format!("order must be in 1..={MAX_ORDER}, got {order}"),
        );
    }
    if !(step > T::zero()) {
        return domain("finite_diff", format!("step must be positive, got {step}"));
    }
    if !(x - T::lit(order as f64) * step / T::lit(2.0) > T::zero()) {
        return domain(
            "finite_diff",
            format!("stencil leaves the positive axis at x={x}, step={step}"),
        );
    }
    let (d1, m1) = central_difference(&f, x, order, step);
    let h2 = step / T::lit(2.0);
    let (d2, m2) = central_difference(&f, x, order, h2);
    let amp = T::lit(2f64.powi(order as i32));
    let round1 = rel_eval_err * m1 * amp / step.powi(order as i32);
    let round2 = rel_eval_err * m2 * amp / h2.powi(order as i32);
    // Richardson estimate (4/3)|d1 - d2| with a safety factor of two.
    let trunc = T::lit(8.0 / 3.0) * (d1 - d2).abs();
    Ok(FiniteDiff {
        value: d1,
        noise_floor: round1 + round2 + trunc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = finite_diff(f64::exp, 1.0, 2, 1e-3).unwrap();
        assert!((r.value - std::f64::consts::E).abs() <= r.noise_floor);
        let r = finite_diff(|x: f64| x * x * x, 1.3, 3, 1e-2).unwrap();
        assert!((r.value - 6.0).abs() <= r.noise_floor.max(1e-9));
        let r = finite_diff(|x: f64| 1.0 / x, 2.0, 1, 1e-4).unwrap();
        assert!((r.value + 0.25).abs() <= r.noise_floor);
    }

    #[test]
    fn rejects_out_of_domain_stencils() {
        assert!(finite_diff(|x: f64| x, 0.1, 4, 0.1).is_err());
        assert!(finite_diff(|x: f64| x, 1.0, 7, 0.01).is_err());
        assert!(finite_diff(|x: f64| x, 1.0, 0, 0.01).is_err());
    }

    #[test]
    fn noise_floor_bounds_error_on_analytic_corpus() {
        // f(x) = x^{-s} e^{-x}: derivatives in closed form via Leibniz.
        let mut total = 0usize;
        let mut covered = 0usize;
        for &lambda in &[0.3_f64, 0.7, 1.0, 2.0, 5.0] {
            for order in 1..=6 {
                for &(name, f, df) in CORPUS {
                    let step = (lambda / (order as f64)).min(1e-1 * lambda.max(1.0)) * 0.5;
                    let r = finite_diff(f, lambda, order, step).unwrap();
                    let truth = df(lambda, order);
                    total += 1;
                    if (r.value - truth).abs() <= r.noise_floor {
                        covered += 1;
                    } else {
                        eprintln!(
                            "{name} order={order} lambda={lambda}: {} vs {truth} floor {}",
                            r.value, r.noise_floor
                        );
                    }
                }
            }
        }
        assert!(covered as f64 >= 0.99 * total as f64, "{covered}/{total}");
    }

    type Corpus = &'static [(&'static str, fn(f64) -> f64, fn(f64, usize) -> f64)];
    const CORPUS: Corpus = &[
        (
            "exp(-x)",
            |x| (-x).exp(),
            |x, k| if k % 2 == 0 { (-x).exp() } else { -(-x).exp() },
        ),
        (
            "1/x",
            |x| 1.0 / x,
            |x, k| {
                let fact: f64 = (1..=k).map(|i| i as f64).product();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * fact / x.powi(k as i32 + 1)
            },
        ),
        (
            "1/(1+x)",
            |x| 1.0 / (1.0 + x),
            |x, k| {
                let fact: f64 = (1..=k).map(|i| i as f64).product();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * fact / (1.0 + x).powi(k as i32 + 1)
            },
        ),
        ("sin", f64::sin, |x, k| match k % 4 {
            0 => x.sin(),
            1 => x.cos(),
            2 => -x.sin(),
            _ => -x.cos(),
        }),
        ("sqrt", f64::sqrt, |x, k| {
            let mut c = 1.0;
            let mut p = 0.5;
            for _ in 0..k {
                c *= p;
                p -= 1.0;
            }
            c * x.powf(0.5 - k as f64)
        }),
    ];
}

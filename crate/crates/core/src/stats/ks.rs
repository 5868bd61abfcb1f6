//! Kolmogorov–Smirnov statistics with asymptotic p-values.

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// Sup-distance between the distribution functions.
    pub d: f64,
    pub p_value: f64,
}

const MIN_LEN: usize = 10;

/// Kolmogorov survival function `Q(λ) = 2 Σ_{k>=1} (-1)^{k-1} e^{-2k²λ²}`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let a2 = -2.0 * lambda * lambda;
    let mut sum = 0.0;
    let mut sign = 1.0;
    let mut prev_term = 0.0_f64;
    for k in 1..=200 {
        let kf = k as f64;
        let term = sign * 2.0 * (a2 * kf * kf).exp();
        sum += term;
        if term.abs() <= 1e-12 * prev_term.abs() || term.abs() <= 1e-300 {
            return sum.clamp(0.0, 1.0);
        }
        sign = -sign;
        prev_term = term;
    }
    1.0
}

fn p_value(d: f64, effective_n: f64) -> f64 {
    let en = effective_n.sqrt();
    kolmogorov_q((en + 0.12 + 0.11 / en) * d)
}

fn sorted(v: &[f64], what: &str) -> Result<Vec<f64>> {
    if v.len() < MIN_LEN {
        return domain(
            "ks",
            format!("{what} needs at least {MIN_LEN} values, got {}", v.len()),
        );
    }
    if v.iter().any(|x| x.is_nan()) {
        return domain("ks", format!("{what} contains NaN"));
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// Two-sample KS test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let a = sorted(a, "first sample")?;
    let b = sorted(b, "second sample")?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0_f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(KsResult {
        d,
        p_value: p_value(d, na * nb / (na + nb)),
    })
}

/// One-sample KS test against a continuous distribution function.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<KsResult> {
    let s = sorted(sample, "sample")?;
    let n = s.len() as f64;
    let mut d = 0.0_f64;
    for (k, &x) in s.iter().enumerate() {
        let fx = cdf(x);
        let lo = k as f64 / n;
        let hi = (k + 1) as f64 / n;
        d = d.max((fx - lo).abs()).max((hi - fx).abs());
    }
    Ok(KsResult {
        d,
        p_value: p_value(d, n),
    })
}

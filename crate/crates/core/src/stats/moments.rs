use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

impl MeanSe {
    /// `|mean - target| / se`, or 0/∞ when the standard error vanishes.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.mean - target).abs();
        if self.se > 0.0 {
            diff / self.se
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Sample mean and its standard error (`n - 1` normalization).
pub fn mc_mean_se(values: &[f64]) -> Result<MeanSe> {
    let n = values.len();
    if n < 2 {
        return domain("mc_mean_se", format!("need at least two values, got {n}"));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let var = ss / (nf - 1.0);
    Ok(MeanSe {
        mean,
        se: (var / nf).sqrt(),
    })
}

/// Ratio estimator `Σ num / Σ den` with a delta-method standard error.
pub fn ratio_mean_se(num: &[f64], den: &[f64]) -> Result<MeanSe> {
    if num.len() != den.len() {
        return domain("ratio_mean_se", "numerator and denominator lengths differ");
    }
    let n = num.len();
    if n < 2 {
        return domain(
            "ratio_mean_se",
            format!("need at least two values, got {n}"),
        );
    }
    let nf = n as f64;
    let mn = num.iter().sum::<f64>() / nf;
    let md = den.iter().sum::<f64>() / nf;
    if md == 0.0 {
        return domain("ratio_mean_se", "denominator mean is zero");
    }
    let r = mn / md;
    let ss: f64 = num.iter().zip(den).map(|(a, b)| (a - r * b).powi(2)).sum();
    let var = ss / (nf - 1.0);
    Ok(MeanSe {
        mean: r,
        se: (var / nf).sqrt() / md.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = mc_mean_se(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!((r.mean, r.se), (1.0, 0.0));
        let r = mc_mean_se(&[0.0, 2.0]).unwrap();
        assert_eq!((r.mean, r.se), (1.0, 1.0));
        assert!(mc_mean_se(&[1.0]).is_err());
        assert!(mc_mean_se(&[]).is_err());
    }

    #[test]
    fn ratio_of_proportional_samples_is_exact() {
        let den = [1.0, 2.0, 3.0, 4.0];
        let num: Vec<f64> = den.iter().map(|d| 2.5 * d).collect();
        let r = ratio_mean_se(&num, &den).unwrap();
        assert_eq!(r.mean, 2.5);
        assert!(r.se < 1e-15);
    }

    #[test]
    fn z_score_edge_cases() {
        let m = MeanSe { mean: 1.0, se: 0.0 };
        assert_eq!(m.z_score(1.0), 0.0);
        assert!(m.z_score(2.0).is_infinite());
    }
}

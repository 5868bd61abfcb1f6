//! Random variates for the laws used throughout the crate, drawn from
//! reproducible ChaCha streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun::{regularized_gamma_p, regularized_gamma_q};

/// Tagged distribution. `L` is standard exponential, `Γ_t` is Gamma(t, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum DistSpec {
    Exponential,
    Gamma {
        t: f64,
    },
    /// `-log L`.
    Gumbel,
    /// `L^ξ`, `ξ < 0`.
    Frechet {
        xi: f64,
    },
    /// `L^ξ`, `ξ > 0`.
    Weibull {
        xi: f64,
    },
    /// Laplace transform `e^{-λ^α}`.
    PositiveStable {
        alpha: f64,
    },
    /// `Γ_t^ξ`.
    GammaPower {
        xi: f64,
        t: f64,
    },
    StdNormal,
}

impl DistSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            DistSpec::Exponential | DistSpec::Gumbel | DistSpec::StdNormal => true,
            DistSpec::Gamma { t } => t > 0.0 && t.is_finite(),
            DistSpec::Frechet { xi } => xi < 0.0 && xi.is_finite(),
            DistSpec::Weibull { xi } => xi > 0.0 && xi.is_finite(),
            DistSpec::PositiveStable { alpha } => alpha > 0.0 && alpha < 1.0,
            DistSpec::GammaPower { xi, t } => {
                xi != 0.0 && xi.is_finite() && t > 0.0 && t.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            domain("DistSpec", format!("invalid parameters in {self:?}"))
        }
    }

    /// Distribution function, when one is available in closed form.
    pub fn cdf(&self, x: f64) -> Option<f64> {
        let value = match *self {
            DistSpec::Exponential => exp_cdf(x),
            DistSpec::Gamma { t } => gamma_cdf(t, x),
            DistSpec::Gumbel => (-(-x).exp()).exp(),
            DistSpec::Frechet { xi } | DistSpec::Weibull { xi } => {
                if x <= 0.0 {
                    0.0
                } else {
                    let s = x.powf(1.0 / xi);
                    if xi > 0.0 {
                        -(-s).exp_m1()
                    } else {
                        (-s).exp()
                    }
                }
            }
            DistSpec::GammaPower { xi, t } => {
                if x <= 0.0 {
                    0.0
                } else if xi > 0.0 {
                    gamma_cdf(t, x.powf(1.0 / xi))
                } else {
                    1.0 - gamma_cdf(t, x.powf(1.0 / xi))
                }
            }
            DistSpec::StdNormal => normal_cdf(x),
            DistSpec::PositiveStable { .. } => return None,
        };
        Some(value)
    }

    /// One draw from `rng`. Parameters are assumed valid.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            DistSpec::Exponential => Exp1.sample(rng),
            DistSpec::Gamma { t } => gamma_draw(t, rng),
            DistSpec::Gumbel => {
                let l: f64 = Exp1.sample(rng);
                -l.ln()
            }
            DistSpec::Frechet { xi } | DistSpec::Weibull { xi } => {
                let l: f64 = Exp1.sample(rng);
                l.powf(xi)
            }
            DistSpec::PositiveStable { alpha } => stable_draw(alpha, rng),
            DistSpec::GammaPower { xi, t } => gamma_draw(t, rng).powf(xi),
            DistSpec::StdNormal => StandardNormal.sample(rng),
        }
    }
}

fn exp_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -(-x).exp_m1()
    }
}

fn gamma_cdf(t: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        regularized_gamma_p(t, x).unwrap_or(f64::NAN)
    }
}

/// `Φ(x)` through the incomplete gamma function `P(1/2, x²/2)`.
pub fn normal_cdf(x: f64) -> f64 {
    let half = 0.5 * regularized_gamma_q(0.5, 0.5 * x * x).unwrap_or(f64::NAN);
    if x < 0.0 {
        half
    } else {
        1.0 - half
    }
}

fn gamma_draw<R: Rng + ?Sized>(t: f64, rng: &mut R) -> f64 {
    Gamma::new(t, 1.0).expect("validated shape").sample(rng)
}

/// Kanter's representation: with `U` uniform on `(0, π)` and `E` exponential,
/// `sin(αU)/sin(U)^{1/α} · (sin((1-α)U)/E)^{(1-α)/α}`.
fn stable_draw<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u = std::f64::consts::PI * rng.gen::<f64>();
    let e: f64 = Exp1.sample(rng);
    let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
    let b = (((1.0 - alpha) * u).sin() / e).powf((1.0 - alpha) / alpha);
    a * b
}

/// A reproducible random stream. The same `(seed, stream_id)` always
/// yields the same sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `k` child streams with pairwise distinct ids derived from `s`.
pub fn split_stream(s: RngStream, k: usize) -> Result<Vec<RngStream>> {
    if k == 0 {
        return domain("split_stream", "k must be at least 1");
    }
    let base = splitmix64(s.stream_id).wrapping_mul(0x2545_f491_4f6c_dd1d);
    Ok((0..k as u64)
        .map(|i| RngStream::new(s.seed, splitmix64(base.wrapping_add(i + 1))))
        .collect())
}

/// `n` independent draws of `d` from the stream `s`.
pub fn sample(d: &DistSpec, n: usize, s: RngStream) -> Result<Vec<f64>> {
    d.validate()?;
    if n == 0 {
        return domain("sample", "n must be at least 1");
    }
    let mut rng = s.rng();
    Ok((0..n).map(|_| d.draw(&mut rng)).collect())
}

//! Path simulation of the spectrally negative Lévy process `Z` and of its
//! exponential functional `I = ∫₀^∞ e^{-Z_s} ds`.
//!
//! Jumps below `-ε` are compound Poisson with sizes drawn from a tabulated
//! inverse survival function; jumps in `(-ε, 0)` are either dropped or
//! replaced by a Brownian term of matching variance. Jumps larger than
//! [`EXACT_TIME_JUMP`] are placed at their exact arrival times; smaller ones
//! are aggregated per grid cell.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::levy_core::{ExponentKind, LevyExponentSpec};
use crate::samplers::{split_stream, RngStream};
use crate::stats::{integrate_with, Domain, QuadOptions};

/// Jumps at least this large (in absolute value) are refined in time.
pub const EXACT_TIME_JUMP: f64 = 0.05;

const TABLE_NODES: usize = 2048;
const GUIDE_CELLS: usize = 4096;
/// Nodes of the survival-uniform table used for jumps below [`EXACT_TIME_JUMP`].
const MEDIUM_NODES: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    pub eps_jump: f64,
    pub window_t: f64,
    pub grid_h: f64,
    pub tail_delta: f64,
    pub max_windows: usize,
    pub use_gaussian_proxy: bool,
}

impl Default for PathConfig {
    fn default() -> Self {
        Self {
            eps_jump: 1e-3,
            window_t: 5.0,
            grid_h: 0.01,
            tail_delta: 1e-8,
            max_windows: 400,
            use_gaussian_proxy: true,
        }
    }
}

impl PathConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| domain("PathConfig", msg.to_string());
        if !(self.eps_jump > 0.0) {
            return bad("eps_jump must be positive");
        }
        if !(self.window_t > 0.0 && self.window_t.is_finite()) {
            return bad("window_t must be positive and finite");
        }
        if !(self.grid_h > 0.0 && self.grid_h.is_finite()) {
            return bad("grid_h must be positive and finite");
        }
        if !(self.tail_delta > 0.0 && self.tail_delta < 1.0) {
            return bad("tail_delta must lie in (0,1)");
        }
        if self.max_windows == 0 {
            return bad("max_windows must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpFunctionalSample {
    pub value_i: f64,
    pub windows_used: usize,
    pub residual_multiplier: f64,
    /// Set when `max_windows` ran out before the multiplier fell below `tail_delta`.
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SDSplit {
    pub level_y: f64,
    pub head_integral: f64,
    pub passage_time: f64,
}

/// Inverse of the jump survival function `S(x) = ∫_{-∞}^{-x} f`, `x >= ε`.
#[derive(Debug)]
struct JumpTable {
    /// `ln S` at the nodes, ascending (so `x` descending).
    log_s: Vec<f64>,
    log_x: Vec<f64>,
    guide: Vec<u32>,
    guide_scale: f64,
    tail_rate: f64,
}

impl JumpTable {
    /// `x` with `S(x) = v`, for `0 < v <= S(ε)`.
    fn invert(&self, v: f64) -> f64 {
        let ls = v.ln();
        let lo = self.log_s[0];
        if ls <= lo {
            // exponential extrapolation beyond the last node
            return self.log_x[0].exp() + (lo - ls) / self.tail_rate;
        }
        let g = (((ls - lo) * self.guide_scale) as usize).min(GUIDE_CELLS - 1);
        let mut k = self.guide[g] as usize;
        let last = self.log_s.len() - 2;
        while k < last && self.log_s[k + 1] < ls {
            k += 1;
        }
        let (a0, a1) = (self.log_s[k], self.log_s[k + 1]);
        let w = if a1 > a0 {
            ((ls - a0) / (a1 - a0)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        (self.log_x[k] + w * (self.log_x[k + 1] - self.log_x[k])).exp()
    }
}

/// Per-(spec, ε) quantities of the truncated process.
#[derive(Debug)]
pub struct JumpTables {
    /// `Λ_ε = ∫_{-∞}^{-ε} f`.
    pub rate: f64,
    /// `∫_{-∞}^{-ε} |x| f`, the compensating drift.
    pub compensation: f64,
    /// `σ_ε² = ∫_{-ε}^0 x² f`.
    pub small_variance: f64,
    /// Survival mass of jumps at least [`EXACT_TIME_JUMP`] in size.
    pub large_rate: f64,
    table: Option<JumpTable>,
    /// Jump sizes at evenly spaced survival levels on `[large_rate, rate]`.
    medium: Vec<f64>,
}

impl JumpTables {
    fn build(spec: &LevyExponentSpec<f64>, eps: f64) -> Result<Self> {
        let opts = QuadOptions {
            abs_tol: 1e-300,
            rel_tol: 1e-11,
            max_subdivisions: 2000,
        };
        let beta = spec.singularity_index();
        let f = |s: f64| spec.density_regularized(-s) * s.powf(-(2.0 + beta));

        // σ² on (-min(ε,1), 0) via x = -v^p, where x² f dx = p g dv.
        let p = 1.0 / (1.0 - beta);
        let core_end = eps.min(1.0);
        let mut small_variance = integrate_with(
            |v: f64| p * spec.density_regularized(-v.powf(p)),
            Domain::Finite(0.0, core_end.powf(1.0 / p)),
            &opts,
        )?
        .value;
        if eps > 1.0 {
            let dom = if eps.is_finite() {
                Domain::Finite(1.0, eps)
            } else {
                Domain::SemiInfinite(1.0)
            };
            small_variance += integrate_with(|s: f64| s * s * f(s), dom, &opts)?.value;
        }

        let rate = if eps.is_finite() {
            integrate_with(f, Domain::SemiInfinite(eps), &opts)?.value
        } else {
            0.0
        };
        if !(rate > f64::MIN_POSITIVE) {
            return Ok(Self {
                rate: 0.0,
                compensation: 0.0,
                small_variance,
                large_rate: 0.0,
                table: None,
                medium: Vec::new(),
            });
        }

        let tail_rate = spec.tail_rate();
        let x_max = (1.0 + 45.0 / tail_rate).max(eps * 4.0);
        let (l0, l1) = (eps.ln(), x_max.ln());
        let nodes: Vec<f64> = (0..TABLE_NODES)
            .map(|i| l0 + (l1 - l0) * i as f64 / (TABLE_NODES - 1) as f64)
            .collect();
        // integrate in w = ln s, where f(-s) ds = s f(-s) dw
        let piece = |a: f64, b: f64, power: i32| -> Result<f64> {
            Ok(integrate_with(
                |w: f64| {
                    let s = w.exp();
                    s.powi(power) * f(s)
                },
                Domain::Finite(a, b),
                &opts,
            )?
            .value)
        };
        let mut survival = vec![0.0; TABLE_NODES];
        survival[TABLE_NODES - 1] = integrate_with(f, Domain::SemiInfinite(x_max), &opts)?.value;
        let mut compensation =
            integrate_with(|s: f64| s * f(s), Domain::SemiInfinite(x_max), &opts)?.value;
        for i in (0..TABLE_NODES - 1).rev() {
            survival[i] = survival[i + 1] + piece(nodes[i], nodes[i + 1], 1)?;
            compensation += piece(nodes[i], nodes[i + 1], 2)?;
        }
        let rate = survival[0];
        let large_rate = if eps >= EXACT_TIME_JUMP {
            rate
        } else {
            integrate_with(f, Domain::SemiInfinite(EXACT_TIME_JUMP), &opts)?.value
        };

        // Drop nodes whose survival underflowed, then store ascending in ln S.
        let keep: Vec<usize> = (0..TABLE_NODES).filter(|&i| survival[i] > 0.0).collect();
        let log_s: Vec<f64> = keep.iter().rev().map(|&i| survival[i].ln()).collect();
        let log_x: Vec<f64> = keep.iter().rev().map(|&i| nodes[i]).collect();
        if log_s.len() < 2 {
            return Err(Error::Overflow {
                func: "JumpTables::build",
                msg: "jump survival underflowed".into(),
            });
        }
        let lo = log_s[0];
        let span = log_s[log_s.len() - 1] - lo;
        let guide_scale = GUIDE_CELLS as f64 / span;
        let mut guide = vec![0u32; GUIDE_CELLS];
        let mut k = 0usize;
        for (g, slot) in guide.iter_mut().enumerate() {
            let level = lo + g as f64 / guide_scale;
            while k + 2 < log_s.len() && log_s[k + 1] <= level {
                k += 1;
            }
            *slot = k as u32;
        }
        let table = JumpTable {
            log_s,
            log_x,
            guide,
            guide_scale,
            tail_rate,
        };
        let medium = if rate > large_rate {
            let step = (rate - large_rate) / (MEDIUM_NODES - 1) as f64;
            (0..MEDIUM_NODES)
                .map(|j| table.invert(large_rate + step * j as f64))
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            rate,
            compensation,
            small_variance,
            large_rate,
            table: Some(table),
            medium,
        })
    }

    /// A jump size in `[ε, EXACT_TIME_JUMP)`, drawn from the medium table.
    fn draw_medium<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let pos = rng.gen::<f64>() * (MEDIUM_NODES - 1) as f64;
        let j = pos as usize;
        let w = pos - j as f64;
        self.medium[j] + w * (self.medium[j + 1] - self.medium[j])
    }

    /// Size of a jump drawn from the normalized tail on `|x| >= ε`, as a positive number.
    pub fn draw_jump<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.draw_between(rng, 0.0, self.rate)
    }

    fn draw_between<R: Rng + ?Sized>(&self, rng: &mut R, lo: f64, hi: f64) -> f64 {
        let table = self
            .table
            .as_ref()
            .expect("draws require a positive jump rate");
        let u: f64 = rng.gen();
        let v = hi - u * (hi - lo);
        table.invert(v.max(f64::MIN_POSITIVE))
    }
}

type CacheKey = (ExponentKind, u64, u64, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<JumpTables>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<JumpTables>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Tables for `(spec, ε)`, computed on first use and shared afterwards.
pub fn jump_tables(spec: &LevyExponentSpec<f64>, eps: f64) -> Result<Arc<JumpTables>> {
    let t_bits = spec.frechet_params().map_or(0, |p| p.t().to_bits());
    let key = (spec.kind(), spec.alpha().to_bits(), t_bits, eps.to_bits());
    if let Some(hit) = cache().lock().expect("cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let built = Arc::new(JumpTables::build(spec, eps)?);
    cache()
        .lock()
        .expect("cache poisoned")
        .entry(key)
        .or_insert_with(|| built.clone());
    Ok(built)
}

struct Outcome {
    z_end: f64,
    integral: f64,
    elapsed: f64,
    hit: bool,
}

/// `∫₀^Δ e^{-Z}` for `Z` linear from `z0` to `z1`.
pub(crate) fn segment_integral(z0: f64, z1: f64, dt: f64) -> f64 {
    let d = z1 - z0;
    let base = dt * (-z0).exp();
    if d.abs() < 1e-9 {
        base * (1.0 - 0.5 * d)
    } else {
        base * -(-d).exp_m1() / d
    }
}

/// A truncated path generator for one exponent and configuration.
pub struct PathSimulator {
    cfg: PathConfig,
    tables: Arc<JumpTables>,
    drift: f64,
    sigma: f64,
    medium_rate: f64,
    medium_cell: Option<Poisson<f64>>,
}

impl PathSimulator {
    pub fn new(spec: &LevyExponentSpec<f64>, cfg: PathConfig) -> Result<Self> {
        cfg.validate()?;
        let tables = jump_tables(spec, cfg.eps_jump)?;
        let drift = spec.drift_m() + tables.compensation;
        let sigma = if cfg.use_gaussian_proxy {
            tables.small_variance.sqrt()
        } else {
            0.0
        };
        let medium_rate = tables.rate - tables.large_rate;
        let medium_cell = if medium_rate > 0.0 {
            Some(
                Poisson::new(medium_rate * cfg.grid_h).map_err(|e| Error::Domain {
                    func: "PathSimulator::new",
                    msg: e.to_string(),
                })?,
            )
        } else {
            None
        };
        Ok(Self {
            cfg,
            tables,
            drift,
            sigma,
            medium_rate,
            medium_cell,
        })
    }

    pub fn config(&self) -> &PathConfig {
        &self.cfg
    }

    pub fn tables(&self) -> &JumpTables {
        &self.tables
    }

    /// Drift of the truncated process, `m + ∫_{x<=-ε} |x| f`.
    pub fn net_drift(&self) -> f64 {
        self.drift
    }

    fn medium_sum<R: Rng + ?Sized>(&self, rng: &mut R, dt: f64) -> f64 {
        let count = if (dt - self.cfg.grid_h).abs() <= 1e-12 * self.cfg.grid_h {
            match &self.medium_cell {
                Some(p) => p.sample(rng),
                None => return 0.0,
            }
        } else if self.medium_rate > 0.0 {
            Poisson::new(self.medium_rate * dt).map_or(0.0, |p| p.sample(rng))
        } else {
            return 0.0;
        };
        (0..count as u64)
            .map(|_| self.tables.draw_medium(rng))
            .sum()
    }

    fn next_large_gap<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.tables.large_rate > 0.0 {
            let e: f64 = Exp1.sample(rng);
            e / self.tables.large_rate
        } else {
            f64::INFINITY
        }
    }

    /// Runs `Z` from 0 for `horizon` time units, stopping early at the first
    /// passage above `level` when one is given.
    fn walk<R: Rng + ?Sized>(&self, rng: &mut R, horizon: f64, level: Option<f64>) -> Outcome {
        let h = self.cfg.grid_h;
        let mut z = 0.0;
        let mut integral = 0.0;
        let mut next_large = self.next_large_gap(rng);
        let mut cell = 0u64;
        loop {
            let start = cell as f64 * h;
            let dt = h.min(horizon - start);
            if dt <= 1e-12 * h {
                return Outcome {
                    z_end: z,
                    integral,
                    elapsed: horizon,
                    hit: false,
                };
            }
            let end = start + dt;
            let mut increment = self.drift * dt;
            if self.sigma > 0.0 {
                let n: f64 = StandardNormal.sample(rng);
                increment += self.sigma * dt.sqrt() * n;
            }
            increment -= self.medium_sum(rng, dt);
            let slope = increment / dt;
            let mut s = start;
            loop {
                let seg_end = next_large.min(end);
                let z1 = z + slope * (seg_end - s);
                if let Some(y) = level {
                    if z1 >= y {
                        let cross = s + (y - z) / slope;
                        integral += segment_integral(z, y, cross - s);
                        return Outcome {
                            z_end: y,
                            integral,
                            elapsed: cross,
                            hit: true,
                        };
                    }
                }
                integral += segment_integral(z, z1, seg_end - s);
                z = z1;
                s = seg_end;
                if next_large <= end {
                    z -= self.tables.draw_between(rng, 0.0, self.tables.large_rate);
                    next_large += self.next_large_gap(rng);
                } else {
                    break;
                }
            }
            cell += 1;
        }
    }

    /// One window of length `t`: `(Z_T, ∫₀^T e^{-Z_s} ds)`.
    pub fn window<R: Rng + ?Sized>(&self, rng: &mut R, t: f64) -> (f64, f64) {
        let out = self.walk(rng, t, None);
        (out.z_end, out.integral)
    }

    pub fn exponential_functional<R: Rng + ?Sized>(&self, rng: &mut R) -> ExpFunctionalSample {
        self.functional_from(rng, 0.0, 1.0)
    }

    fn functional_from<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        mut total: f64,
        mut mult: f64,
    ) -> ExpFunctionalSample {
        for w in 1..=self.cfg.max_windows {
            let out = self.walk(rng, self.cfg.window_t, None);
            total += mult * out.integral;
            mult *= (-out.z_end).exp();
            if mult < self.cfg.tail_delta {
                return ExpFunctionalSample {
                    value_i: total,
                    windows_used: w,
                    residual_multiplier: mult,
                    truncated: false,
                };
            }
        }
        ExpFunctionalSample {
            value_i: total,
            windows_used: self.cfg.max_windows,
            residual_multiplier: mult,
            truncated: true,
        }
    }

    /// First passage of `y`, then an independent functional scaled by `e^{-y}`.
    pub fn sd_split<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        y: f64,
    ) -> Result<(SDSplit, ExpFunctionalSample)> {
        if !(y > 0.0) || !y.is_finite() {
            return domain(
                "sd_split",
                format!("level must be positive and finite, got {y}"),
            );
        }
        let mut z = 0.0;
        let mut head = 0.0;
        let mut elapsed = 0.0;
        for _ in 0..self.cfg.max_windows {
            let out = self.walk(rng, self.cfg.window_t, Some(y - z));
            head += (-z).exp() * out.integral;
            elapsed += out.elapsed;
            if out.hit {
                let split = SDSplit {
                    level_y: y,
                    head_integral: head,
                    passage_time: elapsed,
                };
                let tail = self.exponential_functional(rng);
                return Ok((split, tail));
            }
            z += out.z_end;
        }
        Err(Error::Horizon(format!(
            "level {y} not reached within {} windows of length {}",
            self.cfg.max_windows, self.cfg.window_t
        )))
    }
}

/// `(Z_T, ∫₀^T e^{-Z_s} ds)` along one simulated path.
pub fn simulate_window(
    spec: &LevyExponentSpec<f64>,
    t: f64,
    cfg: &PathConfig,
    s: RngStream,
) -> Result<(f64, f64)> {
    if !(t > 0.0) || !t.is_finite() {
        return domain(
            "simulate_window",
            format!("horizon must be positive, got {t}"),
        );
    }
    let sim = PathSimulator::new(spec, *cfg)?;
    Ok(sim.window(&mut s.rng(), t))
}

fn require_positive_drift(spec: &LevyExponentSpec<f64>) -> Result<()> {
    if !(spec.drift_m() > 0.0) {
        return domain(
            "sample_exponential_functional",
            "the exponent must have positive mean",
        );
    }
    Ok(())
}

pub fn sample_exponential_functional(
    spec: &LevyExponentSpec<f64>,
    cfg: &PathConfig,
    s: RngStream,
) -> Result<ExpFunctionalSample> {
    require_positive_drift(spec)?;
    let sim = PathSimulator::new(spec, *cfg)?;
    Ok(sim.exponential_functional(&mut s.rng()))
}

/// `n` independent functionals on child streams of `s`, in stream order.
pub fn sample_exponential_functionals(
    spec: &LevyExponentSpec<f64>,
    cfg: &PathConfig,
    n: usize,
    s: RngStream,
) -> Result<Vec<ExpFunctionalSample>> {
    require_positive_drift(spec)?;
    let sim = PathSimulator::new(spec, *cfg)?;
    let streams = split_stream(s, n)?;
    Ok(streams
        .par_iter()
        .map(|st| sim.exponential_functional(&mut st.rng()))
        .collect())
}

/// `∫₀^{T_y} e^{-Z} + e^{-y} I'` with `I'` independent of the head.
pub fn sample_sd_composition(
    spec: &LevyExponentSpec<f64>,
    y: f64,
    cfg: &PathConfig,
    s: RngStream,
) -> Result<f64> {
    require_positive_drift(spec)?;
    let sim = PathSimulator::new(spec, *cfg)?;
    let (split, tail) = sim.sd_split(&mut s.rng(), y)?;
    Ok(split.head_integral + (-y).exp() * tail.value_i)
}

/// `n` compositions on child streams of `s`, in stream order.
pub fn sample_sd_compositions(
    spec: &LevyExponentSpec<f64>,
    y: f64,
    cfg: &PathConfig,
    n: usize,
    s: RngStream,
) -> Result<Vec<f64>> {
    require_positive_drift(spec)?;
    let sim = PathSimulator::new(spec, *cfg)?;
    let streams = split_stream(s, n)?;
    streams
        .par_iter()
        .map(|st| {
            let (split, tail) = sim.sd_split(&mut st.rng(), y)?;
            Ok(split.head_integral + (-y).exp() * tail.value_i)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy_core::FrechetParams;

    fn spec(a: f64, t: f64) -> LevyExponentSpec<f64> {
        LevyExponentSpec::frechet_gamma(FrechetParams::new(a, t).unwrap())
    }

    fn deterministic() -> PathConfig {
        PathConfig {
            eps_jump: 1e6,
            use_gaussian_proxy: false,
            ..PathConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        let good = PathConfig::default();
        assert!(good.validate().is_ok());
        assert!(PathConfig {
            eps_jump: 0.0,
            ..good
        }
        .validate()
        .is_err());
        assert!(PathConfig {
            tail_delta: 1.0,
            ..good
        }
        .validate()
        .is_err());
        assert!(PathConfig {
            max_windows: 0,
            ..good
        }
        .validate()
        .is_err());
        assert!(PathConfig {
            grid_h: -1.0,
            ..good
        }
        .validate()
        .is_err());
    }

    #[test]
    fn segment_integral_limits() {
        assert!((segment_integral(0.0, 0.0, 2.0) - 2.0).abs() < 1e-15);
        let exact = (1.0 - (-3.0_f64).exp()) / 3.0;
        assert!((segment_integral(0.0, 3.0, 1.0) - exact).abs() < 1e-15);
    }

    #[test]
    fn deterministic_window_is_closed_form() {
        let sp = spec(0.5, 0.5);
        let cfg = deterministic();
        let (z, integral) = simulate_window(&sp, 3.0, &cfg, RngStream::new(1, 0)).unwrap();
        let b = sp.drift_m();
        assert!((z - 3.0 * b).abs() < 1e-12);
        assert!((integral - (1.0 - (-3.0 * b).exp()) / b).abs() < 1e-12);
    }

    #[test]
    fn deterministic_functional_is_inverse_drift() {
        let sp = spec(0.3, 1.0);
        let cfg = deterministic();
        let out = sample_exponential_functional(&sp, &cfg, RngStream::new(2, 0)).unwrap();
        assert!(!out.truncated);
        assert!(out.residual_multiplier < cfg.tail_delta);
        let b = sp.drift_m();
        assert!((out.value_i - 1.0 / b).abs() < 2.0 * cfg.tail_delta / b);
    }

    #[test]
    fn deterministic_split() {
        let sp = spec(0.5, 0.5);
        let sim = PathSimulator::new(&sp, deterministic()).unwrap();
        let b = sim.net_drift();
        let (split, tail) = sim.sd_split(&mut RngStream::new(3, 0).rng(), 1.0).unwrap();
        assert!((split.passage_time - 1.0 / b).abs() < 1e-9);
        assert!((split.head_integral - (1.0 - (-1.0_f64).exp()) / b).abs() < 1e-9);
        let total = split.head_integral + (-1.0_f64).exp() * tail.value_i;
        assert!((total - 1.0 / b).abs() < 1e-7);
    }

    #[test]
    fn truncation_is_flagged() {
        let cfg = PathConfig {
            max_windows: 1,
            window_t: 0.5,
            ..deterministic()
        };
        let out =
            sample_exponential_functional(&spec(0.5, 0.5), &cfg, RngStream::new(4, 0)).unwrap();
        assert!(out.truncated);
        assert_eq!(out.windows_used, 1);
    }

    #[test]
    fn unreachable_level_is_a_horizon_error() {
        let cfg = PathConfig {
            max_windows: 2,
            window_t: 0.5,
            ..deterministic()
        };
        let sim = PathSimulator::new(&spec(0.5, 0.5), cfg).unwrap();
        assert!(matches!(
            sim.sd_split(&mut RngStream::new(5, 0).rng(), 50.0),
            Err(Error::Horizon(_))
        ));
    }

    #[test]
    fn rate_increases_as_eps_decreases() {
        let sp = spec(0.5, 0.5);
        let mut last = 0.0;
        for &eps in &[0.5, 0.1, 0.01, 1e-3] {
            let rate = jump_tables(&sp, eps).unwrap().rate;
            assert!(rate > last);
            last = rate;
        }
        assert_eq!(jump_tables(&sp, 1e6).unwrap().rate, 0.0);
    }

    #[test]
    fn table_reproduces_jump_moments() {
        let sp = spec(0.5, 0.5);
        let tables = jump_tables(&sp, 1e-2).unwrap();
        let mut rng = RngStream::new(6, 0).rng();
        let n = 400_000;
        let draws: Vec<f64> = (0..n).map(|_| tables.draw_jump(&mut rng)).collect();
        let est = crate::stats::mc_mean_se(&draws).unwrap();
        assert!(est.z_score(tables.compensation / tables.rate).abs() < 4.0);
        let over = draws.iter().filter(|&&x| x >= EXACT_TIME_JUMP).count() as f64 / n as f64;
        let p = tables.large_rate / tables.rate;
        assert!((over - p).abs() < 4.0 * (p * (1.0 - p) / n as f64).sqrt());
    }

    #[test]
    fn batch_is_reproducible() {
        let cfg = PathConfig {
            eps_jump: 0.05,
            ..PathConfig::default()
        };
        let sp = spec(0.5, 0.5);
        let a = sample_exponential_functionals(&sp, &cfg, 8, RngStream::new(9, 1)).unwrap();
        let b = sample_exponential_functionals(&sp, &cfg, 8, RngStream::new(9, 1)).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|s| s.value_i > 0.0));
    }
}

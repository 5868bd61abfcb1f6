//! Named verification checks with serializable reports.
//!
//! Every check has a registry entry with default parameters; callers may
//! override any default but cannot introduce new keys. Checks with several
//! gates report `max(value/limit)` (or `limit/value` for lower bounds) against
//! a threshold of 1, and spell out each gate in `notes`.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::expfun_sim::{
    sample_exponential_functionals, sample_sd_compositions, segment_integral, PathConfig,
};
use crate::ggc_analytics::{
    cm_probe_gamma_power, gumbel_lk_check, laplace_gamma_power, phi_prime, stieltjes_of_thorin,
};
use crate::levy_core::{
    gamma_power_moment, psi_integral, stable_power_moment, FrechetParams, LevyExponentSpec,
};
use crate::samplers::{sample, split_stream, DistSpec, RngStream};
use crate::specfun::{ln_gamma, macdonald_ratio, regularized_gamma_q};
use crate::stats::{ks_one_sample, ks_two_sample, mc_mean_se, ratio_mean_se};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    List(Vec<f64>),
    Text(String),
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Number(v)
    }
}

impl From<Vec<f64>> for ParamValue {
    fn from(v: Vec<f64>) -> Self {
        ParamValue::List(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

pub type Params = BTreeMap<String, ParamValue>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: Params,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub n_samples: u64,
    pub seed: u64,
    pub runtime_ms: u64,
    pub notes: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CheckInfo {
    pub check_id: &'static str,
    pub description: &'static str,
    pub paper_anchor: &'static str,
}

type RunFn = fn(&P, RngStream) -> Result<Outcome>;

struct CheckDef {
    info: CheckInfo,
    defaults: fn() -> Params,
    run: RunFn,
}

macro_rules! params {
    ($($k:literal => $v:expr),* $(,)?) => {{
        let mut m = Params::new();
        $(m.insert($k.to_string(), ParamValue::from($v));)*
        m
    }};
}

fn cm_grid() -> Vec<f64> {
    vec![0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0]
}

const REGISTRY: &[CheckDef] = &[
    CheckDef {
        info: CheckInfo {
            check_id: "moment_recursion",
            description: "Γ(t+αn)/Γ(t) against m ψ(1)…ψ(n-1)/(n-1)! over an (α, t) grid",
            paper_anchor: "moment recursion of the exponential functional",
        },
        defaults: || params!("alpha" => vec![0.2, 0.5, 0.8], "t" => vec![0.4, 1.0, 2.5], "n_max" => 10.0, "limit" => 1e-10),
        run: run_moment_recursion,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "psi_closed_vs_integral",
            description: "closed-form exponent against drift plus compensated jump integral",
            paper_anchor: "integral form of the Lévy exponent",
        },
        defaults: || {
            params!("alpha" => vec![0.2, 0.5, 0.8], "t" => vec![0.4, 1.0, 2.5], "u" => vec![0.5, 1.0, 2.0, 5.0],
                "quad_tol" => 1e-9, "limit" => 1e-6)
        },
        run: run_psi_closed_vs_integral,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "patie_psi_closed_vs_integral",
            description: "stable-family exponent against its integral form, plus its moment recursion",
            paper_anchor: "stable-family exponent",
        },
        defaults: || params!("alpha" => vec![0.2, 0.5, 0.8], "u" => vec![0.5, 1.0, 2.0, 5.0], "quad_tol" => 1e-9,
            "limit" => 1e-6),
        run: run_patie_psi,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "main_theorem_expfun",
            description: "simulated exponential functionals against direct draws of the target law",
            paper_anchor: "main identity in law",
        },
        defaults: || {
            params!("family" => "frechet_gamma", "alpha" => 0.5, "t" => 0.5, "n" => 20000.0, "eps_jump" => 1e-3,
                "grid_h" => 0.01, "window_t" => 5.0, "tail_delta" => 1e-8, "max_windows" => 400.0,
                "gaussian_proxy" => 1.0, "ks_limit" => 0.02, "z_limit" => 3.0)
        },
        run: run_main_theorem,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "sd_split",
            description: "head integral to first passage plus e^{-y} times an independent copy, against direct functionals",
            paper_anchor: "self-decomposability by first passage",
        },
        defaults: || {
            params!("alpha" => 0.3, "t" => 1.0, "y" => 1.0, "n" => 10000.0, "eps_jump" => 1e-3, "grid_h" => 0.01,
                "window_t" => 5.0, "tail_delta" => 1e-8, "max_windows" => 400.0, "gaussian_proxy" => 1.0,
                "ks_limit" => 0.02)
        },
        run: run_sd_split,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "identity_2_1",
            description: "√S_{1/2} against 1/(2√Γ_{1/2}), two-sample KS",
            paper_anchor: "square root of the one-half stable law",
        },
        defaults: || params!("n" => 100000.0, "p_level" => 0.01),
        run: run_identity_2_1,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "gumbel_max_convergence",
            description: "max(L_1..L_n) - log n against the Gumbel law and against L_1 + L_2/2 + … + L_n/n - log n",
            paper_anchor: "Gumbel limit of exponential maxima",
        },
        defaults: || params!("n" => 10000.0, "m" => 10000.0, "ks_limit" => 0.03, "p_level" => 0.01),
        run: run_gumbel_max,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "gumbel_stable_identity",
            description: "-α log L + α log S_α against the Gumbel law, one-sample KS",
            paper_anchor: "Gumbel law from stable and exponential variables",
        },
        defaults: || params!("alpha" => 0.5, "n" => 100000.0, "p_level" => 0.01),
        run: run_gumbel_stable,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "gumbel_lt",
            description: "E[e^{-λX_0}] = Γ(1+λ) by Monte Carlo, and the log Γ(1+λ) integral formula by quadrature",
            paper_anchor: "Gumbel Laplace transform",
        },
        defaults: || {
            params!("n" => 100000.0, "lambda_mc" => vec![0.5, 1.0, 2.0], "lambda_quad" => vec![0.5, 1.0, 2.0, 5.0],
                "z_limit" => 3.0, "quad_limit" => 1e-8)
        },
        run: run_gumbel_lt,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "dufresne",
            description: "∫₀^∞ e^{B_u - tu/2} du by exact Gaussian increments against 2/Γ_t",
            paper_anchor: "Brownian exponential functional",
        },
        defaults: || params!("t" => 0.5, "n" => 10000.0, "step" => 1e-3, "cutoff" => 1e-6, "ks_limit" => 0.02),
        run: run_dufresne,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "bessel_hitting",
            description: "hitting time of 0 by a squared Bessel process of dimension 2(1-t) from 1, against c/Γ_t for c in {1/2, 1/4} (convention-sensitive)",
            paper_anchor: "Bessel hitting time",
        },
        defaults: || params!("t" => 0.8, "n" => 4000.0, "step" => 1e-4, "t_max" => 50.0, "ks_limit" => 0.05),
        run: run_bessel_hitting,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "size_biased_formula",
            description: "E[e^{-λΓ_t^ξ}] against E[e^{-λX_ξ} X_ξ^u]/E[X_ξ^u], u = (t-1)/ξ",
            paper_anchor: "size-biased Gamma powers",
        },
        defaults: || params!("xi" => -0.5, "t" => 2.0, "lambda" => vec![0.5, 1.0, 2.0], "n" => 100000.0,
            "z_limit" => 3.0, "quad_tol" => 1e-12),
        run: run_size_biased,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "subordination_xi_lt_m1",
            description: "L^{-1/α} against S_α/L, and E[e^{-λL^{-1/α}}] = E[e^{-λ^α L^{-α}}]",
            paper_anchor: "Bochner subordination",
        },
        defaults: || params!("alpha" => 0.5, "n" => 100000.0, "lambda" => vec![0.5, 1.0, 2.0], "p_level" => 0.01,
            "quad_limit" => 1e-8),
        run: run_subordination,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "shs_factorization",
            description: "E[e^{-λΓ_t^{-1/α}}] E[S_α^{-αt}] against E[e^{-λ S_α/Γ_{αt}} S_α^{-αt}]",
            paper_anchor: "stable-Gamma factorization",
        },
        defaults: || params!("alpha" => 0.5, "t" => 1.5, "lambda" => vec![0.5, 1.0, 2.0], "n" => 100000.0,
            "z_limit" => 3.0),
        run: run_shs,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "weibull_not_id",
            description: "complete-monotonicity probe of -(d/dλ) log E[e^{-λX_ξ}] for a Weibull ξ; expects a violation",
            paper_anchor: "Weibull powers are not infinitely divisible",
        },
        defaults: || params!("xi" => 0.5, "grid" => cm_grid(), "max_order" => 4.0, "quad_tol" => 1e-13,
            "min_violations" => 1.0),
        run: run_weibull_not_id,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "frechet_cm_consistency",
            description: "complete-monotonicity probe of -(d/dλ) log E[e^{-λΓ_t^ξ}] for ξ in (-1, 0); expects none",
            paper_anchor: "complete monotonicity for Fréchet powers",
        },
        defaults: || params!("xi" => -0.5, "t" => 0.5, "grid" => cm_grid(), "max_order" => 4.0,
            "quad_tol" => 1e-13, "max_violations" => 0.0),
        run: run_frechet_cm,
    },
    CheckDef {
        info: CheckInfo {
            check_id: "grosswald_stieltjes",
            description: "Stieltjes transform of the Thorin density against φ_t' and the Macdonald ratio",
            paper_anchor: "Thorin measure of the reciprocal Gamma",
        },
        defaults: || params!("t" => vec![0.5, 1.0, 1.5, 2.3], "lambda" => vec![0.1, 1.0, 10.0],
            "macdonald_limit" => 1e-6, "stieltjes_limit" => 1e-5, "closed_limit" => 1e-8),
        run: run_grosswald,
    },
];

/// Registered checks, in a fixed order.
pub fn list_checks() -> Vec<CheckInfo> {
    REGISTRY.iter().map(|d| d.info).collect()
}

/// Default parameters of a registered check.
pub fn default_params(check_id: &str) -> Result<Params> {
    Ok((find(check_id)?.defaults)())
}

fn find(check_id: &str) -> Result<&'static CheckDef> {
    REGISTRY
        .iter()
        .find(|d| d.info.check_id == check_id)
        .ok_or_else(|| Error::UnknownCheck(check_id.to_string()))
}

/// Runs one check. `params` override the registry defaults key by key.
pub fn run_check(check_id: &str, params: &Params, s: RngStream) -> Result<CheckReport> {
    let def = find(check_id)?;
    let mut merged = (def.defaults)();
    for (k, v) in params {
        if !merged.contains_key(k) {
            return domain(
                "run_check",
                format!("unknown parameter '{k}' for check '{check_id}'"),
            );
        }
        merged.insert(k.clone(), v.clone());
    }
    let started = Instant::now();
    let out = (def.run)(&P(&merged), s)?;
    let (statistic, threshold, pass, notes) = out.gates.finish();
    Ok(CheckReport {
        check_id: check_id.to_string(),
        params: merged,
        statistic,
        threshold,
        pass,
        n_samples: out.n_samples,
        seed: s.seed,
        runtime_ms: started.elapsed().as_millis() as u64,
        notes: if out.notes.is_empty() {
            notes
        } else {
            format!("{notes}; {}", out.notes)
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub check_id: String,
    #[serde(default)]
    pub params: Params,
}

impl SuiteEntry {
    pub fn new(check_id: &str, params: Params) -> Self {
        Self {
            check_id: check_id.to_string(),
            params,
        }
    }
}

/// Named suites: `full` (every registered check at acceptance scale),
/// `fast` (reduced sample sizes) and `analytic` (no Monte Carlo).
pub fn suite(name: &str) -> Option<Vec<SuiteEntry>> {
    let e = SuiteEntry::new;
    let analytic = || {
        vec![
            e("moment_recursion", Params::new()),
            e("psi_closed_vs_integral", Params::new()),
            e("patie_psi_closed_vs_integral", Params::new()),
            e("weibull_not_id", Params::new()),
            e("frechet_cm_consistency", Params::new()),
            e("grosswald_stieltjes", Params::new()),
        ]
    };
    match name {
        "analytic" => Some(analytic()),
        "full" => {
            let mut v = analytic();
            for (a, t) in [(0.5, 0.5), (0.3, 1.0), (0.7, 2.0)] {
                v.push(e("main_theorem_expfun", params!("alpha" => a, "t" => t)));
            }
            v.push(e(
                "main_theorem_expfun",
                params!("family" => "patie_stable", "alpha" => 0.5),
            ));
            v.push(e("sd_split", Params::new()));
            v.push(e("identity_2_1", Params::new()));
            v.push(e("gumbel_max_convergence", Params::new()));
            v.push(e("gumbel_stable_identity", Params::new()));
            v.push(e("gumbel_lt", Params::new()));
            v.push(e("dufresne", params!("t" => 0.5)));
            v.push(e("dufresne", params!("t" => 1.5)));
            v.push(e("bessel_hitting", Params::new()));
            v.push(e("size_biased_formula", Params::new()));
            v.push(e("subordination_xi_lt_m1", Params::new()));
            v.push(e("shs_factorization", Params::new()));
            Some(v)
        }
        "fast" => {
            let mut v = analytic();
            // coarse jumps and small samples: a smoke test, with loosened limits
            let sim = params!("alpha" => 0.3, "t" => 1.0, "n" => 2000.0, "eps_jump" => 0.01, "ks_limit" => 0.05);
            v.push(e("main_theorem_expfun", sim));
            v.push(e(
                "sd_split",
                params!("n" => 1000.0, "eps_jump" => 0.01, "ks_limit" => 0.08),
            ));
            v.push(e("identity_2_1", params!("n" => 20000.0)));
            v.push(e(
                "gumbel_max_convergence",
                params!("n" => 2000.0, "m" => 1000.0, "ks_limit" => 0.05),
            ));
            v.push(e("gumbel_stable_identity", params!("n" => 20000.0)));
            v.push(e("gumbel_lt", params!("n" => 20000.0)));
            v.push(e(
                "dufresne",
                params!("t" => 1.5, "n" => 2000.0, "step" => 1e-2, "ks_limit" => 0.05),
            ));
            v.push(e(
                "bessel_hitting",
                params!("n" => 1000.0, "step" => 1e-3, "ks_limit" => 0.08),
            ));
            v.push(e("size_biased_formula", params!("n" => 20000.0)));
            v.push(e("subordination_xi_lt_m1", params!("n" => 20000.0)));
            v.push(e("shs_factorization", params!("n" => 20000.0)));
            Some(v)
        }
        _ => None,
    }
}

pub const SUITE_NAMES: &[&str] = &["full", "fast", "analytic"];

/// Runs `entries` on child streams of `(seed, 0)`. Reports come back in entry order.
pub fn run_suite(entries: &[SuiteEntry], seed: u64) -> Result<Vec<CheckReport>> {
    if entries.is_empty() {
        return Ok(Vec::new());
    }
    let streams = split_stream(RngStream::new(seed, 0), entries.len())?;
    entries
        .par_iter()
        .zip(streams.par_iter())
        .map(|(e, s)| run_check(&e.check_id, &e.params, *s))
        .collect()
}

// ---------------------------------------------------------------------------
// parameter access and gate bookkeeping

struct P<'a>(&'a Params);

impl P<'_> {
    fn num(&self, key: &str) -> Result<f64> {
        match self.0.get(key) {
            Some(ParamValue::Number(v)) => Ok(*v),
            _ => domain("run_check", format!("parameter '{key}' must be a number")),
        }
    }

    fn list(&self, key: &str) -> Result<Vec<f64>> {
        match self.0.get(key) {
            Some(ParamValue::Number(v)) => Ok(vec![*v]),
            Some(ParamValue::List(v)) if !v.is_empty() => Ok(v.clone()),
            _ => domain(
                "run_check",
                format!("parameter '{key}' must be a number or a non-empty list"),
            ),
        }
    }

    fn count(&self, key: &str) -> Result<usize> {
        let v = self.num(key)?;
        if !(v >= 1.0) || v.fract() != 0.0 || v > 1e12 {
            return domain(
                "run_check",
                format!("parameter '{key}' must be a positive integer, got {v}"),
            );
        }
        Ok(v as usize)
    }

    fn text(&self, key: &str) -> Result<&str> {
        match self.0.get(key) {
            Some(ParamValue::Text(v)) => Ok(v),
            _ => domain("run_check", format!("parameter '{key}' must be text")),
        }
    }

    fn path_config(&self) -> Result<PathConfig> {
        let cfg = PathConfig {
            eps_jump: self.num("eps_jump")?,
            window_t: self.num("window_t")?,
            grid_h: self.num("grid_h")?,
            tail_delta: self.num("tail_delta")?,
            max_windows: self.count("max_windows")?,
            use_gaussian_proxy: self.num("gaussian_proxy")? != 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

struct Gate {
    name: String,
    value: f64,
    limit: f64,
    at_least: bool,
}

impl Gate {
    fn pass(&self) -> bool {
        if self.at_least {
            self.value >= self.limit
        } else {
            self.value <= self.limit
        }
    }

    fn ratio(&self) -> f64 {
        let r = if self.at_least {
            self.limit / self.value
        } else {
            self.value / self.limit
        };
        if r.is_nan() {
            f64::MAX
        } else {
            r.min(f64::MAX)
        }
    }
}

#[derive(Default)]
struct Gates(Vec<Gate>);

impl Gates {
    fn at_most(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.0.push(Gate {
            name: name.into(),
            value,
            limit,
            at_least: false,
        });
    }

    fn at_least(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.0.push(Gate {
            name: name.into(),
            value,
            limit,
            at_least: true,
        });
    }

    /// `(statistic, threshold, pass, notes)`.
    fn finish(&self) -> (f64, f64, bool, String) {
        let pass = self.0.iter().all(Gate::pass);
        let describe = |g: &Gate| {
            let op = if g.at_least { ">=" } else { "<=" };
            format!("{}: {:.6e} {op} {:.3e}", g.name, g.value, g.limit)
        };
        let notes = self.0.iter().map(describe).collect::<Vec<_>>().join("; ");
        if let [g] = self.0.as_slice() {
            let value = if g.value.is_finite() {
                g.value
            } else {
                f64::MAX
            };
            let convention = if g.at_least {
                "pass iff statistic >= threshold"
            } else {
                "pass iff statistic <= threshold"
            };
            (value, g.limit, pass, format!("{convention}; {notes}"))
        } else {
            let stat = self.0.iter().map(Gate::ratio).fold(0.0, f64::max);
            (stat, 1.0, pass, format!("statistic = max gate ratio (value/limit, or limit/value for lower bounds); {notes}"))
        }
    }
}

struct Outcome {
    gates: Gates,
    n_samples: u64,
    notes: String,
}

impl Outcome {
    fn new(gates: Gates, n_samples: usize) -> Self {
        Self {
            gates,
            n_samples: n_samples as u64,
            notes: String::new(),
        }
    }
}

fn streams(s: RngStream, k: usize) -> Result<Vec<RngStream>> {
    split_stream(s, k)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// ---------------------------------------------------------------------------
// check bodies

fn run_moment_recursion(p: &P, _s: RngStream) -> Result<Outcome> {
    let n_max = p.count("n_max")?;
    let mut worst: f64 = 0.0;
    for &a in &p.list("alpha")? {
        for &t in &p.list("t")? {
            let fp = FrechetParams::new(a, t)?;
            for n in 1..=n_max {
                let (d, r) = gamma_power_moment(&fp, n)?;
                worst = worst.max(rel_err(r, d));
            }
        }
    }
    let mut g = Gates::default();
    g.at_most("max relative error", worst, p.num("limit")?);
    Ok(Outcome::new(g, 0))
}

fn run_psi_closed_vs_integral(p: &P, _s: RngStream) -> Result<Outcome> {
    let tol = p.num("quad_tol")?;
    let us = p.list("u")?;
    let mut worst: f64 = 0.0;
    for &a in &p.list("alpha")? {
        for &t in &p.list("t")? {
            let spec = LevyExponentSpec::frechet_gamma(FrechetParams::new(a, t)?);
            for &u in &us {
                let closed = spec.psi_closed(u)?;
                let integral = psi_integral(&spec, u, tol)?;
                worst = worst.max((integral - closed).abs() / (1.0 + closed.abs()));
            }
        }
    }
    let mut g = Gates::default();
    g.at_most(
        "max |integral - closed|/(1+|closed|)",
        worst,
        p.num("limit")?,
    );
    Ok(Outcome::new(g, 0))
}

fn run_patie_psi(p: &P, _s: RngStream) -> Result<Outcome> {
    let tol = p.num("quad_tol")?;
    let limit = p.num("limit")?;
    let mut worst: f64 = 0.0;
    let mut worst_moment: f64 = 0.0;
    for &a in &p.list("alpha")? {
        let spec = LevyExponentSpec::patie_stable(a)?;
        for &u in &p.list("u")? {
            let closed = spec.psi_closed(u)?;
            let integral = psi_integral(&spec, u, tol)?;
            worst = worst.max((integral - closed).abs() / (1.0 + closed.abs()));
        }
        for n in 1..=8 {
            let (d, r) = stable_power_moment(a, n)?;
            worst_moment = worst_moment.max(rel_err(r, d));
        }
    }
    let mut g = Gates::default();
    g.at_most("max |integral - closed|/(1+|closed|)", worst, limit);
    g.at_most("moment recursion relative error", worst_moment, 1e-10);
    Ok(Outcome::new(g, 0))
}

fn run_main_theorem(p: &P, s: RngStream) -> Result<Outcome> {
    let alpha = p.num("alpha")?;
    let n = p.count("n")?;
    let cfg = p.path_config()?;
    let (spec, reference) = match p.text("family")? {
        "frechet_gamma" => {
            let t = p.num("t")?;
            (
                LevyExponentSpec::frechet_gamma(FrechetParams::new(alpha, t)?),
                DistSpec::GammaPower { xi: -alpha, t },
            )
        }
        "patie_stable" => (
            LevyExponentSpec::patie_stable(alpha)?,
            DistSpec::PositiveStable { alpha },
        ),
        other => return domain("main_theorem_expfun", format!("unknown family '{other}'")),
    };
    let st = streams(s, 2)?;
    let sims = sample_exponential_functionals(&spec, &cfg, n, st[0])?;
    let values: Vec<f64> = sims.iter().map(|x| x.value_i).collect();
    let mut direct = sample(&reference, n, st[1])?;
    if matches!(reference, DistSpec::PositiveStable { .. }) {
        // the stable-family functional is distributed as S_α^α
        direct.iter_mut().for_each(|x| *x = x.powf(alpha));
    }
    let ks = ks_two_sample(&values, &direct)?;
    let inv: Vec<f64> = values.iter().map(|v| 1.0 / v).collect();
    let z = mc_mean_se(&inv)?.z_score(spec.drift_m()).abs();
    let truncated = sims.iter().filter(|x| x.truncated).count();
    let mut g = Gates::default();
    g.at_most("KS distance to direct draws", ks.d, p.num("ks_limit")?);
    g.at_most("|z| of mean 1/I against m", z, p.num("z_limit")?);
    let mut out = Outcome::new(g, 2 * n);
    out.notes = format!("KS p-value {:.4}; truncated paths {truncated}", ks.p_value);
    Ok(out)
}

fn run_sd_split(p: &P, s: RngStream) -> Result<Outcome> {
    let spec = LevyExponentSpec::frechet_gamma(FrechetParams::new(p.num("alpha")?, p.num("t")?)?);
    let cfg = p.path_config()?;
    let n = p.count("n")?;
    let y = p.num("y")?;
    let st = streams(s, 2)?;
    let composed = sample_sd_compositions(&spec, y, &cfg, n, st[0])?;
    let direct: Vec<f64> = sample_exponential_functionals(&spec, &cfg, n, st[1])?
        .iter()
        .map(|x| x.value_i)
        .collect();
    let ks = ks_two_sample(&composed, &direct)?;
    let mut g = Gates::default();
    g.at_most("KS distance composed vs direct", ks.d, p.num("ks_limit")?);
    let mut out = Outcome::new(g, 2 * n);
    out.notes = format!("KS p-value {:.4}", ks.p_value);
    Ok(out)
}

fn run_identity_2_1(p: &P, s: RngStream) -> Result<Outcome> {
    let n = p.count("n")?;
    let st = streams(s, 2)?;
    let a: Vec<f64> = sample(&DistSpec::PositiveStable { alpha: 0.5 }, n, st[0])?
        .iter()
        .map(|x| x.sqrt())
        .collect();
    let b: Vec<f64> = sample(&DistSpec::Gamma { t: 0.5 }, n, st[1])?
        .iter()
        .map(|g| 1.0 / (2.0 * g.sqrt()))
        .collect();
    let ks = ks_two_sample(&a, &b)?;
    let mut g = Gates::default();
    g.at_least("KS p-value", ks.p_value, p.num("p_level")?);
    let mut out = Outcome::new(g, 2 * n);
    out.notes = format!("KS distance {:.6}", ks.d);
    Ok(out)
}

fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

fn run_gumbel_max(p: &P, s: RngStream) -> Result<Outcome> {
    let n = p.count("n")?;
    let m = p.count("m")?;
    let log_m = (m as f64).ln();
    let st = streams(s, 2 * n)?;
    let draw = |stream: &RngStream, renyi: bool| -> f64 {
        let mut rng = stream.rng();
        let mut acc: f64 = if renyi { 0.0 } else { f64::NEG_INFINITY };
        for k in 1..=m {
            let l = DistSpec::Exponential.draw(&mut rng);
            acc = if renyi {
                acc + l / k as f64
            } else {
                acc.max(l)
            };
        }
        acc - log_m
    };
    let maxima: Vec<f64> = st[..n].par_iter().map(|x| draw(x, false)).collect();
    let sums: Vec<f64> = st[n..].par_iter().map(|x| draw(x, true)).collect();
    let ks = ks_one_sample(&maxima, gumbel_cdf)?;
    let pair = ks_two_sample(&maxima, &sums)?;
    let mut g = Gates::default();
    g.at_most("KS distance max vs Gumbel", ks.d, p.num("ks_limit")?);
    g.at_least(
        "KS p-value max vs Rényi sum",
        pair.p_value,
        p.num("p_level")?,
    );
    Ok(Outcome::new(g, 2 * n * m))
}

fn run_gumbel_stable(p: &P, s: RngStream) -> Result<Outcome> {
    let alpha = p.num("alpha")?;
    let n = p.count("n")?;
    let st = streams(s, 2)?;
    let l = sample(&DistSpec::Exponential, n, st[0])?;
    let sa = sample(&DistSpec::PositiveStable { alpha }, n, st[1])?;
    let v: Vec<f64> = l
        .iter()
        .zip(&sa)
        .map(|(l, s)| -alpha * l.ln() + alpha * s.ln())
        .collect();
    let ks = ks_one_sample(&v, gumbel_cdf)?;
    let mut g = Gates::default();
    g.at_least("KS p-value against Gumbel", ks.p_value, p.num("p_level")?);
    let mut out = Outcome::new(g, 2 * n);
    out.notes = format!("KS distance {:.6}", ks.d);
    Ok(out)
}

fn run_gumbel_lt(p: &P, s: RngStream) -> Result<Outcome> {
    let n = p.count("n")?;
    let x = sample(&DistSpec::Gumbel, n, s)?;
    let mut g = Gates::default();
    let z_limit = p.num("z_limit")?;
    for &l in &p.list("lambda_mc")? {
        let e: Vec<f64> = x.iter().map(|v| (-l * v).exp()).collect();
        let z = mc_mean_se(&e)?.z_score(ln_gamma(1.0 + l)?.exp()).abs();
        g.at_most(format!("|z| of E[exp(-{l} X_0)]"), z, z_limit);
    }
    let quad_limit = p.num("quad_limit")?;
    for &l in &p.list("lambda_quad")? {
        let (lhs, rhs) = gumbel_lk_check(l, quad_limit * 1e-2)?;
        g.at_most(
            format!("|log Γ(1+{l}) - integral form|"),
            (lhs - rhs).abs(),
            quad_limit,
        );
    }
    Ok(Outcome::new(g, n))
}

fn run_dufresne(p: &P, s: RngStream) -> Result<Outcome> {
    let t = p.num("t")?;
    let n = p.count("n")?;
    let h = p.num("step")?;
    let cutoff = p.num("cutoff")?;
    if !(t > 0.0) || !(h > 0.0) || !(cutoff > 0.0 && cutoff < 1.0) {
        return domain("dufresne", "need t > 0, step > 0 and cutoff in (0,1)");
    }
    // drift alone brings e^{-tu/2} below the cutoff at u_min
    let u_min = -2.0 * cutoff.ln() / t;
    let log_cut = cutoff.ln();
    let sd = h.sqrt();
    let drift = -0.5 * t * h;
    let values: Vec<f64> = streams(s, n)?
        .par_iter()
        .map(|st| {
            let mut rng = st.rng();
            let (mut x, mut u, mut acc) = (0.0_f64, 0.0_f64, 0.0_f64);
            while u < u_min || x > log_cut {
                let n: f64 = DistSpec::StdNormal.draw(&mut rng);
                let next = x + drift + sd * n;
                acc += segment_integral(-x, -next, h);
                x = next;
                u += h;
            }
            acc
        })
        .collect();
    let ks = ks_one_sample(&values, |v| {
        if v <= 0.0 {
            0.0
        } else {
            regularized_gamma_q(t, 2.0 / v).unwrap_or(f64::NAN)
        }
    })?;
    let mut g = Gates::default();
    g.at_most("KS distance to 2/Γ_t", ks.d, p.num("ks_limit")?);
    Ok(Outcome::new(g, n))
}

/// Sup distance between the empirical CDF of `sorted` (values at `cap`
/// are censored) and `cdf`, taken over `x < cap`.
fn censored_ks_distance(sorted: &[f64], cap: f64, cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut below = 0usize;
    for (i, &x) in sorted.iter().enumerate() {
        if x >= cap {
            break;
        }
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
        below = i + 1;
    }
    d.max((below as f64 / n - cdf(cap)).abs())
}

fn run_bessel_hitting(p: &P, s: RngStream) -> Result<Outcome> {
    let t = p.num("t")?;
    let n = p.count("n")?;
    let h = p.num("step")?;
    let cap = p.num("t_max")?;
    if !(t > 0.0 && t < 1.0) || !(h > 0.0) || !(cap > h) {
        return domain(
            "bessel_hitting",
            "need t in (0,1), step > 0 and t_max > step",
        );
    }
    let delta = 2.0 * (1.0 - t);
    let sd = 2.0 * h.sqrt();
    let mut times: Vec<f64> = streams(s, n)?
        .par_iter()
        .map(|st| {
            let mut rng = st.rng();
            let (mut q, mut time) = (1.0_f64, 0.0_f64);
            while time < cap {
                let z: f64 = DistSpec::StdNormal.draw(&mut rng);
                let next = q + delta * h + sd * q.max(0.0).sqrt() * z;
                if next <= 0.0 {
                    return (time + h * q / (q - next)).min(cap);
                }
                q = next;
                time += h;
            }
            cap
        })
        .collect();
    times.sort_by(f64::total_cmp);
    let censored = times.iter().filter(|&&x| x >= cap).count();
    let dist = |c: f64| {
        censored_ks_distance(&times, cap, |x| {
            if x <= 0.0 {
                0.0
            } else {
                regularized_gamma_q(t, c / x).unwrap_or(f64::NAN)
            }
        })
    };
    let (d_half, d_quarter) = (dist(0.5), dist(0.25));
    let (best_c, best_d) = if d_half <= d_quarter {
        ("1/2", d_half)
    } else {
        ("1/4", d_quarter)
    };
    let mut g = Gates::default();
    g.at_most("KS distance to c/Γ_t at best c", best_d, p.num("ks_limit")?);
    let mut out = Outcome::new(g, n);
    out.notes = format!(
        "matched constant c = {best_c}; KS distance {d_half:.6} for c = 1/2, {d_quarter:.6} for c = 1/4; {censored} paths censored at t_max"
    );
    Ok(out)
}

fn run_size_biased(p: &P, s: RngStream) -> Result<Outcome> {
    let xi = p.num("xi")?;
    let t = p.num("t")?;
    let n = p.count("n")?;
    let tol = p.num("quad_tol")?;
    let u = (t - 1.0) / xi;
    let x = sample(&DistSpec::Exponential, n, s)?;
    let xs: Vec<f64> = x.iter().map(|l| l.powf(xi)).collect();
    let w: Vec<f64> = xs.iter().map(|v| v.powf(u)).collect();
    let mut g = Gates::default();
    let z_limit = p.num("z_limit")?;
    for &l in &p.list("lambda")? {
        let num: Vec<f64> = xs.iter().zip(&w).map(|(v, w)| (-l * v).exp() * w).collect();
        let est = ratio_mean_se(&num, &w)?;
        let exact = laplace_gamma_power(xi, t, l, tol)?;
        g.at_most(
            format!("|z| at lambda {l}"),
            est.z_score(exact).abs(),
            z_limit,
        );
    }
    Ok(Outcome::new(g, n))
}

fn run_subordination(p: &P, s: RngStream) -> Result<Outcome> {
    let alpha = p.num("alpha")?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain("subordination_xi_lt_m1", "alpha must lie in (0,1)");
    }
    let xi = -1.0 / alpha;
    let n = p.count("n")?;
    let st = streams(s, 3)?;
    let a: Vec<f64> = sample(&DistSpec::Exponential, n, st[0])?
        .iter()
        .map(|l| l.powf(xi))
        .collect();
    let l = sample(&DistSpec::Exponential, n, st[1])?;
    let sa = sample(&DistSpec::PositiveStable { alpha }, n, st[2])?;
    let b: Vec<f64> = l.iter().zip(&sa).map(|(l, s)| s / l).collect();
    let ks = ks_two_sample(&a, &b)?;
    let mut g = Gates::default();
    g.at_least("KS p-value L^xi vs S/L", ks.p_value, p.num("p_level")?);
    let limit = p.num("quad_limit")?;
    for &lam in &p.list("lambda")? {
        let lhs = laplace_gamma_power(xi, 1.0, lam, 1e-13)?;
        let rhs = laplace_gamma_power(-alpha, 1.0, lam.powf(alpha), 1e-13)?;
        g.at_most(
            format!("|transform difference| at lambda {lam}"),
            (lhs - rhs).abs(),
            limit,
        );
    }
    Ok(Outcome::new(g, 3 * n))
}

fn run_shs(p: &P, s: RngStream) -> Result<Outcome> {
    let alpha = p.num("alpha")?;
    let t = p.num("t")?;
    let n = p.count("n")?;
    if !(alpha > 0.0 && alpha < 1.0) || !(t > 0.0) {
        return domain("shs_factorization", "need alpha in (0,1) and t > 0");
    }
    let xi = -1.0 / alpha;
    let st = streams(s, 2)?;
    let gam = sample(&DistSpec::Gamma { t: alpha * t }, n, st[0])?;
    let sa = sample(&DistSpec::PositiveStable { alpha }, n, st[1])?;
    let moment = (ln_gamma(1.0 + t)? - ln_gamma(1.0 + alpha * t)?).exp();
    let mut g = Gates::default();
    let z_limit = p.num("z_limit")?;
    for &l in &p.list("lambda")? {
        let lhs = laplace_gamma_power(xi, t, l, 1e-13)? * moment;
        let v: Vec<f64> = gam
            .iter()
            .zip(&sa)
            .map(|(g, s)| (-l * s / g).exp() * s.powf(-alpha * t))
            .collect();
        g.at_most(
            format!("|z| at lambda {l}"),
            mc_mean_se(&v)?.z_score(lhs).abs(),
            z_limit,
        );
    }
    Ok(Outcome::new(g, 2 * n))
}

fn describe_violations(r: &crate::ggc_analytics::CMProbeReport<f64>) -> String {
    let first = r
        .violations
        .first()
        .map(|v| {
            format!(
                "first violation at order {} lambda {} magnitude {:.6e}",
                v.order, v.lambda, v.magnitude
            )
        })
        .unwrap_or_else(|| "no violations".to_string());
    format!(
        "{first}; {} violations; reported noise floor {:.3e}",
        r.violations.len(),
        r.noise_floor
    )
}

fn run_weibull_not_id(p: &P, _s: RngStream) -> Result<Outcome> {
    let xi = p.num("xi")?;
    if !(xi > 0.0) {
        return domain("weibull_not_id", "xi must be positive");
    }
    let r = cm_probe_gamma_power(
        xi,
        1.0,
        &p.list("grid")?,
        p.count("max_order")?,
        p.num("quad_tol")?,
    )?;
    let mut g = Gates::default();
    g.at_least(
        "violations above noise floor",
        r.violations.len() as f64,
        p.num("min_violations")?,
    );
    let mut out = Outcome::new(g, 0);
    out.notes = describe_violations(&r);
    Ok(out)
}

fn run_frechet_cm(p: &P, _s: RngStream) -> Result<Outcome> {
    let xi = p.num("xi")?;
    let r = cm_probe_gamma_power(
        xi,
        p.num("t")?,
        &p.list("grid")?,
        p.count("max_order")?,
        p.num("quad_tol")?,
    )?;
    let mut g = Gates::default();
    g.at_most(
        "violations above noise floor",
        r.violations.len() as f64,
        p.num("max_violations")?,
    );
    let mut out = Outcome::new(g, 0);
    out.notes = describe_violations(&r);
    Ok(out)
}

fn run_grosswald(p: &P, _s: RngStream) -> Result<Outcome> {
    let mut mac: f64 = 0.0;
    let mut sti: f64 = 0.0;
    for &t in &p.list("t")? {
        for &l in &p.list("lambda")? {
            let pp = phi_prime(t, l, 1e-12)?;
            mac = mac.max(rel_err(pp, macdonald_ratio(t, l)?));
            sti = sti.max(rel_err(stieltjes_of_thorin(t, l, 1e-10)?, pp));
        }
    }
    let closed =
        rel_err(phi_prime(0.5, 4.0, 1e-12)?, 0.25).max(rel_err(phi_prime(1.5, 1.0, 1e-12)?, 0.25));
    let mut g = Gates::default();
    g.at_most(
        "phi_prime vs Macdonald ratio",
        mac,
        p.num("macdonald_limit")?,
    );
    g.at_most(
        "Stieltjes transform vs phi_prime",
        sti,
        p.num("stieltjes_limit")?,
    );
    g.at_most(
        "closed forms at (1/2, 4) and (3/2, 1)",
        closed,
        p.num("closed_limit")?,
    );
    Ok(Outcome::new(g, 0))
}

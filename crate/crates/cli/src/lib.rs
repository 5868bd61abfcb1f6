//! `lflab`: run verification suites, dump samples, print tables and draw
//! static plots.
//!
//! Exit codes: 0 when every selected check passes, 1 when a check fails or a
//! run errors, 2 for usage errors (including unknown check ids).

pub mod config;
pub mod error;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lflab_core::expfun_sim::{sample_exponential_functionals, PathConfig};
use lflab_core::ggc_analytics::{
    cm_probe_gamma_power, phi_prime, stieltjes_of_thorin, thorin_density,
};
use lflab_core::identity_suite::{default_params, list_checks, run_suite, SuiteEntry, SUITE_NAMES};
use lflab_core::levy_core::{gamma_power_moment, psi_integral, LevyExponentSpec};
use lflab_core::samplers::{sample, DistSpec, RngStream};
use lflab_core::specfun::macdonald_ratio;
use lflab_core::{FrechetParams, LevyExponent};

pub use config::SuiteConfig;
use error::{CliError, CliResult};
pub use report::SuiteReport;

const DEFAULT_SEED: u64 = 42;
const SEED_ENV: &str = "LFLAB_SEED";
const TABLE_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "lflab",
    version,
    about = "Verification suites for Gamma-power and exponential-functional identities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run checks and write a JSON report.
    Verify(VerifyArgs),
    /// Print draws from a distribution, one per line.
    Sample(SampleArgs),
    /// Print a grid of analytic quantities as CSV.
    Table(TableArgs),
    /// Write an SVG plot.
    Plot(PlotArgs),
    /// List registered checks and suites.
    List,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Named suite (full, fast, analytic).
    #[arg(long, conflicts_with = "check")]
    pub suite: Option<String>,
    /// Check id to run; may be repeated.
    #[arg(long)]
    pub check: Vec<String>,
    /// TOML suite configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Parameter override `key=value`, applied to every selected check that takes `key`.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Root seed. Falls back to the config file, then to LFLAB_SEED, then 42.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample size for every check that takes `n` and does not set it.
    #[arg(long)]
    pub n_default: Option<u64>,
    /// Report path. Defaults to `<output_dir>/report.json`, or stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a summary SVG next to the report.
    #[arg(long)]
    pub plots: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum DistName {
    Exponential,
    Gamma,
    Gumbel,
    Frechet,
    Weibull,
    PositiveStable,
    GammaPower,
    StdNormal,
    /// Exponential functional of the Lévy process selected by `--family`.
    Expfun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    FrechetGamma,
    PatieStable,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[arg(long, value_enum)]
    pub dist: DistName,
    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, default_value = "frechet_gamma")]
    pub family: Family,
    #[arg(long, default_value_t = PathConfig::default().eps_jump)]
    pub eps: f64,
    #[arg(long, default_value_t = PathConfig::default().tail_delta)]
    pub tail_delta: f64,
    #[arg(long, default_value_t = PathConfig::default().window_t)]
    pub window_t: f64,
    #[arg(long, default_value_t = PathConfig::default().max_windows)]
    pub max_windows: usize,
    /// Drop the Gaussian stand-in for jumps below `--eps`.
    #[arg(long)]
    pub no_gaussian_proxy: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum TableKind {
    /// Closed-form and quadrature exponent on a grid of `u`.
    Psi,
    /// The same for the stable exponent.
    PatiePsi,
    /// Entire moments, direct and by the product recursion.
    Moments,
    /// Thorin density on a grid of `x`.
    Thorin,
    /// φ′ against the Bessel ratio and the Stieltjes form.
    PhiPrime,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub kind: TableKind,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub t: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,5")]
    pub u: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,10")]
    pub lambda: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.1,1,10")]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    /// Empirical CDF against the reference law.
    Cdf,
    /// Sign chart of a complete-monotonicity probe of `λ ↦ E[e^{-λ Γ_t^ξ}]`.
    Cm,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub kind: PlotKind,
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2,0.5,1,2,5")]
    pub grid: Vec<f64>,
    #[arg(long, default_value_t = 4)]
    pub max_order: usize,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("lflab: {e}");
            if e.exit_code() == 2 {
                eprintln!("usage: lflab verify [--suite NAME | --check ID ...] [--config FILE] [--seed N] [--out FILE]");
            }
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<i32> {
    match cmd {
        Command::Verify(a) => verify(a),
        Command::Sample(a) => sample_cmd(a),
        Command::Table(a) => table_cmd(a),
        Command::Plot(a) => plot_cmd(a),
        Command::List => {
            let mut out = String::new();
            for c in list_checks() {
                out.push_str(&format!("{:<28} {}\n", c.check_id, c.description));
            }
            out.push_str(&format!("suites: {}\n", SUITE_NAMES.join(", ")));
            write_output(None, &out)?;
            Ok(0)
        }
    }
}

fn env_seed() -> CliResult<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) if !v.trim().is_empty() => {
            v.trim().parse().map(Some).map_err(|_| {
                CliError::Usage(format!("{SEED_ENV}='{v}' is not an unsigned integer"))
            })
        }
        _ => Ok(None),
    }
}

/// Merges the config file with the flags; flags win.
pub fn resolve_verify(a: &VerifyArgs) -> CliResult<(String, SuiteConfig, Vec<SuiteEntry>)> {
    let mut cfg = match &a.config {
        Some(p) => SuiteConfig::load(p)?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = &a.suite {
        cfg.suite = Some(s.clone());
        cfg.checks.clear();
    }
    if !a.check.is_empty() {
        cfg.suite = None;
        cfg.checks = a
            .check
            .iter()
            .map(|id| SuiteEntry::new(id, Default::default()))
            .collect();
    }
    if a.seed.is_some() {
        cfg.seed = a.seed;
    }
    if cfg.seed.is_none() {
        cfg.seed = Some(env_seed()?.unwrap_or(DEFAULT_SEED));
    }
    if a.n_default.is_some() {
        cfg.n_default = a.n_default;
    }
    if a.plots {
        cfg.emit_plots = true;
    }
    let name = match (&cfg.suite, cfg.checks.is_empty()) {
        (_, false) => "custom".to_string(),
        (Some(s), true) => s.clone(),
        (None, true) => "full".to_string(),
    };
    let mut entries = cfg.entries()?;
    for raw in &a.params {
        let (key, value) = config::parse_param(raw)?;
        let mut used = false;
        for e in &mut entries {
            if default_params(&e.check_id)?.contains_key(&key) {
                e.params.insert(key.clone(), value.clone());
                used = true;
            }
        }
        if !used {
            return Err(CliError::Usage(format!(
                "no selected check takes parameter '{key}'"
            )));
        }
    }
    Ok((name, cfg, entries))
}

fn verify(a: VerifyArgs) -> CliResult<i32> {
    let (name, cfg, entries) = resolve_verify(&a)?;
    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let checks = run_suite(&entries, seed)?;
    for c in &checks {
        eprintln!(
            "{} {:<28} statistic {:.6e} threshold {:.6e} ({} ms)",
            if c.pass { "PASS" } else { "FAIL" },
            c.check_id,
            c.statistic,
            c.threshold,
            c.runtime_ms
        );
    }
    let report = SuiteReport::new(name, seed, checks);
    let out = a
        .out
        .clone()
        .or_else(|| cfg.output_dir.as_ref().map(|d| d.join("report.json")));
    if let Some(path) = &out {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        }
    }
    write_output(out.as_deref(), &report.to_json())?;
    if cfg.emit_plots {
        let dir = out
            .as_deref()
            .and_then(Path::parent)
            .filter(|d| !d.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        let rows: Vec<(String, f64, bool)> = report
            .checks
            .iter()
            .map(|c| {
                (
                    c.check_id.clone(),
                    gate_ratio(c.statistic, c.threshold),
                    c.pass,
                )
            })
            .collect();
        let svg = svg::report_chart(&format!("{} (seed {seed})", report.suite), &rows);
        write_output(Some(&dir.join("report.svg")), &svg)?;
    }
    Ok(if report.all_pass { 0 } else { 1 })
}

fn gate_ratio(statistic: f64, threshold: f64) -> f64 {
    if threshold > 0.0 && statistic.is_finite() {
        (statistic / threshold).abs()
    } else {
        statistic.abs()
    }
}

fn need(v: Option<f64>, flag: &str, dist: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Usage(format!("--dist {dist} requires --{flag}")))
}

enum Target {
    Law(DistSpec),
    Functional(LevyExponent, PathConfig),
}

fn target(d: &DistArgs) -> CliResult<Target> {
    let law = match d.dist {
        DistName::Exponential => DistSpec::Exponential,
        DistName::Gamma => DistSpec::Gamma {
            t: need(d.t, "t", "gamma")?,
        },
        DistName::Gumbel => DistSpec::Gumbel,
        DistName::Frechet => DistSpec::Frechet {
            xi: need(d.xi, "xi", "frechet")?,
        },
        DistName::Weibull => DistSpec::Weibull {
            xi: need(d.xi, "xi", "weibull")?,
        },
        DistName::PositiveStable => DistSpec::PositiveStable {
            alpha: need(d.alpha, "alpha", "positive_stable")?,
        },
        DistName::GammaPower => DistSpec::GammaPower {
            xi: need(d.xi, "xi", "gamma_power")?,
            t: need(d.t, "t", "gamma_power")?,
        },
        DistName::StdNormal => DistSpec::StdNormal,
        DistName::Expfun => {
            let alpha = need(d.alpha, "alpha", "expfun")?;
            let spec = match d.family {
                Family::FrechetGamma => LevyExponentSpec::frechet_gamma(
                    FrechetParams::new(alpha, need(d.t, "t", "expfun")?).map_err(usage)?,
                ),
                Family::PatieStable => LevyExponentSpec::patie_stable(alpha).map_err(usage)?,
            };
            let cfg = PathConfig {
                eps_jump: d.eps,
                window_t: d.window_t,
                tail_delta: d.tail_delta,
                max_windows: d.max_windows,
                use_gaussian_proxy: !d.no_gaussian_proxy,
                ..PathConfig::default()
            };
            cfg.validate().map_err(usage)?;
            return Ok(Target::Functional(spec, cfg));
        }
    };
    law.validate().map_err(usage)?;
    Ok(Target::Law(law))
}

fn usage(e: lflab_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn draw(t: &Target, n: usize, s: RngStream) -> CliResult<Vec<f64>> {
    Ok(match t {
        Target::Law(d) => sample(d, n, s)?,
        Target::Functional(spec, cfg) => sample_exponential_functionals(spec, cfg, n, s)?
            .into_iter()
            .map(|x| x.value_i)
            .collect(),
    })
}

fn sample_cmd(a: SampleArgs) -> CliResult<i32> {
    let t = target(&a.dist)?;
    let xs = draw(&t, a.n, RngStream::new(a.seed, a.stream))?;
    let mut out = String::with_capacity(24 * xs.len());
    for x in xs {
        out.push_str(&format!("{x}\n"));
    }
    write_output(a.out.as_deref(), &out)?;
    Ok(0)
}

fn table_cmd(a: TableArgs) -> CliResult<i32> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Format(e.to_string());
    match a.kind {
        TableKind::Psi => {
            w.write_record(["alpha", "t", "u", "psi_closed", "psi_integral"])
                .map_err(csv_err)?;
            for &alpha in &a.alpha {
                for &t in &a.t {
                    let spec = LevyExponentSpec::frechet_gamma(
                        FrechetParams::new(alpha, t).map_err(usage)?,
                    );
                    for &u in &a.u {
                        let closed = spec.psi_closed(u).map_err(usage)?;
                        let quad = psi_integral(&spec, u, TABLE_TOL)?;
                        w.serialize((alpha, t, u, closed, quad)).map_err(csv_err)?;
                    }
                }
            }
        }
        TableKind::PatiePsi => {
            w.write_record(["alpha", "u", "psi_closed", "psi_integral"])
                .map_err(csv_err)?;
            for &alpha in &a.alpha {
                let spec = LevyExponentSpec::patie_stable(alpha).map_err(usage)?;
                for &u in &a.u {
                    let closed = spec.psi_closed(u).map_err(usage)?;
                    let quad = psi_integral(&spec, u, TABLE_TOL)?;
                    w.serialize((alpha, u, closed, quad)).map_err(csv_err)?;
                }
            }
        }
        TableKind::Moments => {
            w.write_record(["alpha", "t", "n", "direct", "recursion"])
                .map_err(csv_err)?;
            for &alpha in &a.alpha {
                for &t in &a.t {
                    let p = FrechetParams::new(alpha, t).map_err(usage)?;
                    for n in 1..=a.n_max {
                        let (d, r) = gamma_power_moment(&p, n)?;
                        w.serialize((alpha, t, n, d, r)).map_err(csv_err)?;
                    }
                }
            }
        }
        TableKind::Thorin => {
            w.write_record(["t", "x", "thorin_density"])
                .map_err(csv_err)?;
            for &t in &a.t {
                for &x in &a.x {
                    w.serialize((t, x, thorin_density(t, x).map_err(usage)?))
                        .map_err(csv_err)?;
                }
            }
        }
        TableKind::PhiPrime => {
            w.write_record([
                "t",
                "lambda",
                "phi_prime",
                "macdonald_ratio",
                "stieltjes_of_thorin",
            ])
            .map_err(csv_err)?;
            for &t in &a.t {
                for &l in &a.lambda {
                    let p = phi_prime(t, l, TABLE_TOL).map_err(usage)?;
                    let m = macdonald_ratio(t, l).map_err(usage)?;
                    let s = stieltjes_of_thorin(t, l, TABLE_TOL).map_err(usage)?;
                    w.serialize((t, l, p, m, s)).map_err(csv_err)?;
                }
            }
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Format(e.to_string()))?;
    write_output(a.out.as_deref(), &String::from_utf8_lossy(&bytes))?;
    Ok(0)
}

fn plot_cmd(a: PlotArgs) -> CliResult<i32> {
    let svg = match a.kind {
        PlotKind::Cdf => {
            let t = target(&a.dist)?;
            let (reference, label): (DistSpec, String) = match &t {
                Target::Law(d) => (*d, format!("{d:?}")),
                Target::Functional(spec, _) => {
                    let p = spec.frechet_params().ok_or_else(|| {
                        CliError::Usage("no closed-form reference CDF for the stable family".into())
                    })?;
                    (
                        DistSpec::GammaPower {
                            xi: -p.alpha(),
                            t: p.t(),
                        },
                        format!("Γ_t^(-α), α = {}, t = {}", p.alpha(), p.t()),
                    )
                }
            };
            if reference.cdf(0.0).is_none() {
                return Err(CliError::Usage(format!(
                    "no closed-form CDF for {reference:?}"
                )));
            }
            let xs = draw(&t, a.n, RngStream::new(a.seed, 0))?;
            let cdf = move |x: f64| reference.cdf(x).unwrap_or(f64::NAN);
            svg::cdf_overlay(
                &format!("{:?} (seed {})", a.dist.dist, a.seed),
                &xs,
                &cdf,
                &label,
            )
        }
        PlotKind::Cm => {
            let xi = need(a.dist.xi, "xi", "cm")?;
            let t = need(a.dist.t, "t", "cm")?;
            let report =
                cm_probe_gamma_power(xi, t, &a.grid, a.max_order, TABLE_TOL).map_err(usage)?;
            let title = format!(
                "CM probe of E[exp(-λ Γ_t^ξ)], ξ = {xi}, t = {t}: {} violations",
                report.violations.len()
            );
            svg::cm_sign_chart(&title, &report)
        }
    };
    write_output(Some(&a.out), &svg)?;
    Ok(0)
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::io(format!("writing {}", p.display()), e))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io("writing stdout", e))
        }
    }
}

/// The suite a config or flag set would run, without running it.
pub fn planned_entries(argv: &[&str]) -> CliResult<Vec<SuiteEntry>> {
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    match cli.command {
        Command::Verify(a) => Ok(resolve_verify(&a)?.2),
        _ => Err(CliError::Usage("not a verify invocation".into())),
    }
}

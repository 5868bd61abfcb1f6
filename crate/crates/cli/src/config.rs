//! Suite configuration files (TOML).
//!
//! ```toml
//! seed = 42
//! n_default = 20000
//! output_dir = "out"
//! emit_plots = true
//!
//! [[checks]]
//! check_id = "identity_2_1"
//! params = { n = 100000 }
//! ```

use std::path::{Path, PathBuf};

use lflab_core::identity_suite::{default_params, suite, ParamValue, SuiteEntry};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Named suite used when `checks` is empty.
    pub suite: Option<String>,
    #[serde(default)]
    pub checks: Vec<SuiteEntry>,
    pub seed: Option<u64>,
    pub n_default: Option<u64>,
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub emit_plots: bool,
}

impl SuiteConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// The checks to run, with `n_default` filled in where a check takes `n`
    /// and the entry leaves it unset.
    pub fn entries(&self) -> CliResult<Vec<SuiteEntry>> {
        let mut entries = if self.checks.is_empty() {
            let name = self.suite.as_deref().unwrap_or("full");
            suite(name).ok_or_else(|| CliError::Usage(format!("unknown suite '{name}'")))?
        } else {
            self.checks.clone()
        };
        for e in &mut entries {
            let defaults = default_params(&e.check_id)?;
            if let Some(n) = self.n_default {
                if defaults.contains_key("n") && !e.params.contains_key("n") {
                    e.params.insert("n".into(), ParamValue::Number(n as f64));
                }
            }
        }
        Ok(entries)
    }
}

/// Parses `key=value`, where the value is a number, a comma-separated list
/// of numbers (optionally in brackets) or text.
pub fn parse_param(raw: &str) -> CliResult<(String, ParamValue)> {
    let (k, v) = raw.split_once('=').ok_or_else(|| {
        CliError::Usage(format!("parameter '{raw}' is not of the form key=value"))
    })?;
    let v = v.trim();
    let inner = v
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(v);
    let value = if let Ok(x) = v.parse::<f64>() {
        ParamValue::Number(x)
    } else if inner.contains(',') || inner != v {
        let list: Result<Vec<f64>, _> = inner.split(',').map(|s| s.trim().parse::<f64>()).collect();
        ParamValue::List(list.map_err(|_| CliError::Usage(format!("bad number list in '{raw}'")))?)
    } else {
        ParamValue::Text(v.to_string())
    };
    Ok((k.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_parameter_values() {
        assert_eq!(
            parse_param("n=100").unwrap(),
            ("n".into(), ParamValue::Number(100.0))
        );
        assert_eq!(parse_param("xi=-0.5").unwrap().1, ParamValue::Number(-0.5));
        assert_eq!(
            parse_param("grid=0.1,0.5").unwrap().1,
            ParamValue::List(vec![0.1, 0.5])
        );
        assert_eq!(
            parse_param("grid=[2]").unwrap().1,
            ParamValue::List(vec![2.0])
        );
        assert_eq!(
            parse_param("family=patie_stable").unwrap().1,
            ParamValue::Text("patie_stable".into())
        );
        assert!(parse_param("n").is_err());
        assert!(parse_param("grid=1,x").is_err());
    }

    #[test]
    fn named_suite_gets_n_default() {
        let cfg = SuiteConfig {
            suite: Some("fast".into()),
            n_default: Some(77),
            ..Default::default()
        };
        let entries = cfg.entries().unwrap();
        let plain = entries
            .iter()
            .find(|e| e.check_id == "size_biased_formula")
            .unwrap();
        assert_eq!(plain.params["n"], ParamValue::Number(20000.0));
        assert!(cfg.entries().unwrap().iter().all(|e| {
            !default_params(&e.check_id).unwrap().contains_key("n") || e.params.contains_key("n")
        }));
    }
}

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use cliffmech_core::{GradientMode, IntegratorConfig, Method};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Derive,
    Simulate,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Markdown,
    Latex,
}

/// Every knob of a run. In a config file all fields are optional;
/// command-line flags take precedence over file values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub n: Option<usize>,
    pub structure: Option<usize>,
    pub ham: Option<String>,
    pub x0: Option<Vec<f64>>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub method: Option<Method>,
    pub tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
    pub gradient: Option<GradientMode>,
    pub output: Option<PathBuf>,
    pub diagnostics: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config file {}: {e}", path.display())))
    }

    /// Fills every unset field of `self` from `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        RunConfig {
            command: self.command.or(base.command),
            n: self.n.or(base.n),
            structure: self.structure.or(base.structure),
            ham: self.ham.or(base.ham),
            x0: self.x0.or(base.x0),
            dt: self.dt.or(base.dt),
            steps: self.steps.or(base.steps),
            method: self.method.or(base.method),
            tolerance: self.tolerance.or(base.tolerance),
            max_iterations: self.max_iterations.or(base.max_iterations),
            gradient: self.gradient.or(base.gradient),
            output: self.output.or(base.output),
            diagnostics: self.diagnostics.or(base.diagnostics),
            format: self.format.or(base.format),
        }
    }

    pub fn n(&self) -> Result<usize, CliError> {
        match self.n.unwrap_or(1) {
            0 => Err(CliError::Usage("--n must be at least 1".into())),
            n => Ok(n),
        }
    }

    pub fn structure(&self) -> Result<usize, CliError> {
        match self.structure {
            Some(k @ 1..=6) => Ok(k),
            Some(k) => Err(CliError::Usage(format!("--structure must be in 1..=6, got {k}"))),
            None => Err(CliError::Usage("--structure is required".into())),
        }
    }

    pub fn integrator(&self) -> IntegratorConfig {
        let d = IntegratorConfig::default();
        IntegratorConfig {
            method: self.method.unwrap_or(d.method),
            dt: self.dt.unwrap_or(d.dt),
            steps: self.steps.unwrap_or(d.steps),
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
        }
    }

    pub fn format_or(&self, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            let names: Vec<_> = allowed.iter().map(|f| format!("{f:?}").to_lowercase()).collect();
            Err(CliError::Usage(
                format!("format {f:?} not available here; use one of {}", names.join(", ")).to_lowercase(),
            ))
        }
    }
}

/// Parses `1,0,-0.5` into coordinates.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| format!("'{s}' is not a finite number"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = RunConfig { n: Some(2), dt: Some(0.5), steps: Some(3), ..Default::default() };
        let flags = RunConfig { dt: Some(0.1), ..Default::default() };
        let merged = flags.over(file);
        assert_eq!(merged.n, Some(2));
        assert_eq!(merged.dt, Some(0.1));
        assert_eq!(merged.integrator().steps, 3);
    }

    #[test]
    fn file_fields_parse() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"n": 1, "method": "midpoint", "x0": [1, 0], "format": "csv", "gradient": "finite-difference"}"#,
        )
        .unwrap();
        assert_eq!(cfg.method, Some(Method::ImplicitMidpoint));
        assert_eq!(cfg.gradient, Some(GradientMode::FiniteDifference));
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn validation() {
        assert!(RunConfig { n: Some(0), ..Default::default() }.n().is_err());
        assert_eq!(RunConfig::default().n().unwrap(), 1);
        assert!(RunConfig { structure: Some(9), ..Default::default() }.structure().is_err());
        assert!(RunConfig::default().structure().is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("1, 0,-0.5").unwrap(), vec![1.0, 0.0, -0.5]);
        assert!(parse_vector("1,,2").is_err());
        assert!(parse_vector("nan").is_err());
    }
}

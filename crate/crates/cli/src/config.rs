//! Run configuration read from TOML.

use std::path::{Path, PathBuf};

use blowfly_waves::model::{validate_params, ModelParams, Violation};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// κ-table integrand selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Printed,
    Consistent,
}

fn default_n_trunc() -> f64 {
    50.0
}
fn default_t_ker() -> f64 {
    80.0
}
fn default_step() -> f64 {
    0.01
}
fn default_tol() -> f64 {
    1e-6
}
fn default_max_iter() -> usize {
    200
}
fn default_true() -> bool {
    true
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}
fn default_kappa_steps() -> Vec<f64> {
    vec![1.0, 0.1, 0.01, 0.001, 0.0001]
}

/// Every knob of a run. Delays enter as `tau`; `r = c·tau` is derived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub p: f64,
    pub delta: f64,
    pub a: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub c: f64,
    #[serde(default)]
    pub beta: f64,

    /// Frequency truncation `N` of the kernel integral.
    #[serde(default = "default_n_trunc")]
    pub n_trunc: f64,
    /// Simpson intervals for the kernel integral; chosen from `N` and `t_ker` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_freq: Option<usize>,
    #[serde(default = "default_t_ker")]
    pub t_ker: f64,
    #[serde(default = "default_step")]
    pub h_ker: f64,
    /// Profile grid half-width `L`; `max(40, 3/δ₁)` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Bridge half-width `T`; searched by doubling when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_bridge: Option<f64>,
    #[serde(default)]
    pub clamp: bool,
    /// Refuse to iterate unless the quasi pair is certified.
    #[serde(default = "default_true")]
    pub require_certificates: bool,

    #[serde(default = "default_out")]
    pub out: PathBuf,

    #[serde(default = "default_kappa_mode")]
    pub kappa_mode: Mode,
    #[serde(default = "default_kappa_steps")]
    pub kappa_steps: Vec<f64>,
    /// Contour shift of the κ-table; `|√2 - √3|` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_shift: Option<f64>,
}

fn default_kappa_mode() -> Mode {
    Mode::Printed
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn params(&self) -> ModelParams {
        ModelParams::new(self.p, self.delta, self.a, self.tau1, self.tau2, self.c, self.beta)
    }

    pub fn kappa_shift(&self) -> f64 {
        self.kappa_shift.unwrap_or((2f64.sqrt() - 3f64.sqrt()).abs())
    }

    /// Numeric-control checks that do not depend on the model.
    pub fn check_controls(&self) -> Result<(), CliError> {
        let positive = [
            ("n_trunc", self.n_trunc),
            ("t_ker", self.t_ker),
            ("h_ker", self.h_ker),
            ("step", self.step),
            ("tol", self.tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if let Some(l) = self.half_width {
            if !(l > 0.0 && l.is_finite()) {
                return Err(CliError::Config(format!("half_width must be positive, got {l}")));
            }
        }
        if let Some(t) = self.t_bridge {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("t_bridge must be positive, got {t}")));
            }
        }
        if self.max_iter == 0 {
            return Err(CliError::Config("max_iter must be at least 1".into()));
        }
        if let Some(&h) = self.kappa_steps.iter().find(|&&h| h.is_nan() || h <= 0.0) {
            return Err(CliError::Config(format!("kappa_steps must be positive, got {h}")));
        }
        Ok(())
    }

    /// Model checks. `c = 2√p` to round-off is let through as a warning,
    /// everything else is fatal.
    pub fn check_model(&self) -> Result<Vec<String>, CliError> {
        let params = self.params();
        let mut warnings = Vec::new();
        let mut fatal = Vec::new();
        for v in validate_params(&params) {
            match v {
                Violation::SpeedBelowBirth { c, bound } if (c - bound).abs() <= 1e-12 * bound => {
                    warnings.push(format!("{v}; continuing at the boundary"));
                }
                _ => fatal.push(v.to_string()),
            }
        }
        if fatal.is_empty() {
            Ok(warnings)
        } else {
            Err(CliError::Domain(fatal.join("; ")))
        }
    }

    /// The config with the automatic choices filled in, as written next to
    /// the outputs.
    pub fn echo(&self, derived: &[(&str, f64)]) -> String {
        let params = self.params();
        let mut head = format!("# r1 = {}\n# r2 = {}\n", params.r1, params.r2);
        for (name, v) in derived {
            head.push_str(&format!("# {name} = {v}\n"));
        }
        head + &self.to_toml()
    }
}

//! Run configuration shared by the command-line flags and JSON config files.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical::{ForceSpectrum, OscillatorParams};
use crate::verify::{Fault, Suite};

/// Invalid or incomplete configuration; maps to exit code 2.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("cannot write output: {0}")]
    Write(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Sho,
    Driven,
    Mathieu,
    Verify,
    Sweep,
}

/// The three phase computations a sweep can iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Sho,
    Driven,
    Mathieu,
}

impl From<Target> for Mode {
    fn from(t: Target) -> Self {
        match t {
            Target::Sho => Mode::Sho,
            Target::Driven => Mode::Driven,
            Target::Mathieu => Mode::Mathieu,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Closed,
    Quadrature,
    Perturbative,
    Numeric,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

/// Parameter range for a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub target: Target,
    /// One of `C, beta, D, phi, n, M, w, hbar, a, eps`.
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    #[serde(default)]
    pub scale: Scale,
}

pub const SWEEP_PARAMS: [&str; 10] = ["C", "beta", "D", "phi", "n", "M", "w", "hbar", "a", "eps"];

impl SweepSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !SWEEP_PARAMS.contains(&self.param.as_str()) {
            return Err(ConfigError::Invalid(format!(
                "unknown sweep parameter '{}'; expected one of {}",
                self.param,
                SWEEP_PARAMS.join(", ")
            )));
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(ConfigError::Invalid("sweep bounds must be finite".into()));
        }
        if self.steps == 0 {
            return Err(ConfigError::Invalid("sweep needs at least one step".into()));
        }
        if self.scale == Scale::Log && (self.from <= 0.0 || self.to <= 0.0) {
            return Err(ConfigError::Invalid("log sweeps need positive bounds".into()));
        }
        Ok(())
    }

    /// Grid values in order.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let s = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.from + s * (self.to - self.from),
                    Scale::Log => (self.from.ln() + s * (self.to.ln() - self.from.ln())).exp(),
                }
            })
            .collect()
    }
}

fn one() -> f64 {
    1.0
}

/// Everything a single invocation needs. Field names follow the CLI flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(rename = "C", default = "one")]
    pub c: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(rename = "D", default)]
    pub d: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default)]
    pub n: usize,
    #[serde(rename = "M", default = "one")]
    pub mass: f64,
    #[serde(rename = "w", default = "one")]
    pub freq: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default)]
    pub half_period: bool,
    /// Path of a ForceSpectrum JSON file; relative paths resolve against the config file.
    #[serde(default)]
    pub force_spec: Option<PathBuf>,
    /// Inline alternative to `force_spec`.
    #[serde(default)]
    pub spectrum: Option<ForceSpectrum>,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub suite: Suite,
    #[serde(default)]
    pub fault: Option<Fault>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            c: 1.0,
            beta: 0.0,
            d: 0.0,
            phi: 0.0,
            n: 0,
            mass: 1.0,
            freq: 1.0,
            hbar: 1.0,
            half_period: false,
            force_spec: None,
            spectrum: None,
            a: None,
            eps: None,
            method: Method::Both,
            suite: Suite::All,
            fault: None,
            sweep: None,
            format: Format::Json,
            out: None,
        }
    }

    /// Reads a JSON config; a relative `force_spec` is resolved against the
    /// directory of the config file.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        let mut config: Self =
            serde_json::from_str(&text).map_err(|source| ConfigError::Parse { path: path.into(), source })?;
        if let (Some(spec), Some(dir)) = (&config.force_spec, path.parent()) {
            if spec.is_relative() {
                config.force_spec = Some(dir.join(spec));
            }
        }
        Ok(config)
    }

    pub fn params(&self) -> Result<OscillatorParams, ConfigError> {
        OscillatorParams::new(self.mass, self.freq, self.hbar).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Loads the drive spectrum from `spectrum` or `force_spec`.
    pub fn load_spectrum(&self) -> Result<ForceSpectrum, ConfigError> {
        match (&self.spectrum, &self.force_spec) {
            (Some(_), Some(_)) => Err(ConfigError::Invalid("give either an inline spectrum or --force-spec, not both".into())),
            (Some(s), None) => Ok(s.clone()),
            (None, Some(path)) => {
                let text =
                    std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.clone(), source })?;
                serde_json::from_str(&text).map_err(|source| ConfigError::Parse { path: path.clone(), source })
            }
            (None, None) => Err(ConfigError::Invalid("driven mode needs --force-spec <path> (ForceSpectrum JSON)".into())),
        }
    }

    /// Mode-specific required fields and finiteness.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let named = [
            ("C", self.c),
            ("beta", self.beta),
            ("D", self.d),
            ("phi", self.phi),
            ("M", self.mass),
            ("w", self.freq),
            ("hbar", self.hbar),
        ];
        for (name, v) in named.iter().chain([("a", self.a.unwrap_or(1.0)), ("eps", self.eps.unwrap_or(0.0))].iter()) {
            if !v.is_finite() {
                return Err(ConfigError::Invalid(format!("--{name} must be finite, got {v}")));
            }
        }
        let method_ok = match self.mode {
            Mode::Sho | Mode::Driven => matches!(self.method, Method::Closed | Method::Quadrature | Method::Both),
            Mode::Mathieu => matches!(self.method, Method::Perturbative | Method::Numeric | Method::Both),
            Mode::Verify | Mode::Sweep => true,
        };
        if !method_ok {
            let allowed = if self.mode == Mode::Mathieu { "perturbative, numeric or both" } else { "closed, quadrature or both" };
            return Err(ConfigError::Invalid(format!(
                "--method {:?} does not apply to {:?} mode; use {allowed}",
                self.method, self.mode
            )));
        }
        match self.mode {
            Mode::Mathieu => {
                if self.a.is_none() || self.eps.is_none() {
                    return Err(ConfigError::Invalid("mathieu mode needs --a and --eps".into()));
                }
            }
            Mode::Driven => {
                if self.spectrum.is_none() && self.force_spec.is_none() {
                    return Err(ConfigError::Invalid("driven mode needs --force-spec <path> (ForceSpectrum JSON)".into()));
                }
                if self.half_period {
                    return Err(ConfigError::Invalid("--half-period applies to sho mode only".into()));
                }
            }
            Mode::Sweep => {
                let sweep = self.sweep.as_ref().ok_or_else(|| ConfigError::Invalid("sweep mode needs a sweep range".into()))?;
                sweep.validate()?;
                let mut point = self.clone();
                point.mode = sweep.target.into();
                point.sweep = None;
                // Swept parameters need not be set in the base config.
                if sweep.param == "a" {
                    point.a.get_or_insert(1.0);
                }
                if sweep.param == "eps" {
                    point.eps.get_or_insert(0.0);
                }
                point.validate()?;
            }
            Mode::Sho | Mode::Verify => {}
        }
        Ok(())
    }

    /// Copy of this config with one named parameter replaced.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self, ConfigError> {
        let mut c = self.clone();
        match name {
            "C" => c.c = value,
            "beta" => c.beta = value,
            "D" => c.d = value,
            "phi" => c.phi = value,
            "n" => {
                if !(value >= 0.0 && value.fract() == 0.0) {
                    return Err(ConfigError::Invalid(format!("n must be a non-negative integer, got {value}")));
                }
                c.n = value as usize;
            }
            "M" => c.mass = value,
            "w" => c.freq = value,
            "hbar" => c.hbar = value,
            "a" => c.a = Some(value),
            "eps" => c.eps = Some(value),
            other => return Err(ConfigError::Invalid(format!("unknown parameter '{other}'"))),
        }
        Ok(c)
    }
}

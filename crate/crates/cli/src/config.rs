//! Run configurations: schema-validated (unknown keys rejected), fully
//! echoed into output metadata so any emitted file can be re-run bit-for-bit.

use floquet_spin::floquet::Coupling;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Uniform grid given as `start:stop:count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

impl TryFrom<String> for GridSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid '{s}' must be start:stop:count"));
        }
        let start: f64 = parts[0].parse().map_err(|e| format!("grid start: {e}"))?;
        let stop: f64 = parts[1].parse().map_err(|e| format!("grid stop: {e}"))?;
        let count: usize = parts[2].parse().map_err(|e| format!("grid count: {e}"))?;
        if count == 0 || !start.is_finite() || !stop.is_finite() {
            return Err(format!("grid '{s}' must be finite with count >= 1"));
        }
        Ok(Self { start, stop, count })
    }
}

impl From<GridSpec> for String {
    fn from(g: GridSpec) -> String {
        format!("{}:{}:{}", g.start, g.stop, g.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum InitialState {
    Plus,
    Minus,
    Mixed,
}

fn default_samples() -> usize {
    256
}

fn default_periods() -> usize {
    8
}

fn default_kappa() -> f64 {
    1.0
}

fn default_coupling() -> Coupling {
    Coupling::SigmaZ
}

fn default_initial() -> InitialState {
    InitialState::Minus
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasienergyMapConfig {
    pub a_grid: GridSpec,
    pub delta_grid: GridSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeEvolveConfig {
    /// One of the named parameter presets; explicit `a`/`delta` override it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default = "default_periods")]
    pub n_periods: usize,
    #[serde(default = "default_samples")]
    pub samples_per_period: usize,
    #[serde(default = "default_initial")]
    pub initial: InitialState,
}

/// The four free-evolution presets: drive amplitude and gap each side of the
/// drive frequency.
pub const FREE_EVOLVE_PRESETS: &[(&str, f64, f64)] = &[
    ("weak-drive-small-gap", 0.1, 0.5),
    ("weak-drive-large-gap", 0.5, 2.5),
    ("strong-drive-small-gap", 10.0, 0.4),
    ("strong-drive-large-gap", 4.0, 1.5),
];

impl FreeEvolveConfig {
    pub fn resolve(&self) -> Result<(f64, f64), CliError> {
        if let Some(name) = &self.preset {
            let found = FREE_EVOLVE_PRESETS
                .iter()
                .find(|(p, _, _)| p == name)
                .ok_or_else(|| {
                    CliError::Config(format!(
                        "unknown preset '{name}'; available: {}",
                        FREE_EVOLVE_PRESETS
                            .iter()
                            .map(|(p, _, _)| *p)
                            .collect::<Vec<_>>()
                            .join(", ")
                    ))
                })?;
            return Ok((self.a.unwrap_or(found.1), self.delta.unwrap_or(found.2)));
        }
        match (self.a, self.delta) {
            (Some(a), Some(d)) => Ok((a, d)),
            _ => Err(CliError::Config(
                "free-evolve needs either a preset or both a and delta".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub a: f64,
    pub delta: f64,
    pub theta: f64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_coupling")]
    pub coupling: Coupling,
    #[serde(default = "default_initial")]
    pub initial: InitialState,
    #[serde(default = "default_periods")]
    pub n_periods: usize,
    #[serde(default = "default_samples")]
    pub samples_per_period: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QsScanConfig {
    pub delta: f64,
    pub theta: f64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_coupling")]
    pub coupling: Coupling,
    pub a_grid: GridSpec,
    /// Evaluation time within the period (tau = 0 samples the stroboscopic
    /// instants 2 n pi).
    #[serde(default)]
    pub tau_eval: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoherenceScanConfig {
    pub delta: f64,
    pub theta: f64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_coupling")]
    pub coupling: Coupling,
    pub a_grid: GridSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum HysteresisMode {
    Quasistationary,
    Transient,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HysteresisConfig {
    pub a: f64,
    pub delta: f64,
    pub theta: f64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_coupling")]
    pub coupling: Coupling,
    pub mode: HysteresisMode,
    #[serde(default = "default_periods")]
    pub n_periods: usize,
    #[serde(default = "default_samples")]
    pub samples_per_period: usize,
    #[serde(default = "default_initial")]
    pub initial: InitialState,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderConfigFile {
    /// Named preset (currently `mn12-seventh-resonance`); explicit fields
    /// override its values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma12_per_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma21_per_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_rad_per_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_periods: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_period: Option<usize>,
    /// Initial populations of the (minus-dressed, plus-dressed) pointer pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_populations: Option<(f64, f64)>,
}

impl LadderConfigFile {
    pub fn resolve(&self) -> Result<floquet_spin::hysteresis::LadderConfig, CliError> {
        let mut base = match self.preset.as_deref() {
            None => floquet_spin::hysteresis::LadderConfig::default(),
            Some("mn12-seventh-resonance") => {
                floquet_spin::hysteresis::mn12_seventh_resonance()
            }
            Some(other) => {
                return Err(CliError::Config(format!(
                    "unknown ladder preset '{other}'; available: mn12-seventh-resonance"
                )))
            }
        };
        if let Some(v) = self.a {
            base.a = v;
        }
        if let Some(v) = self.delta {
            base.delta = v;
        }
        if let Some(v) = self.gamma12_per_s {
            base.gamma12_per_s = v;
        }
        if let Some(v) = self.gamma21_per_s {
            base.gamma21_per_s = Some(v);
        }
        if let Some(v) = self.omega_rad_per_s {
            base.omega_rad_per_s = v;
        }
        if let Some(v) = self.n_periods {
            base.n_periods = v;
        }
        if let Some(v) = self.samples_per_period {
            base.samples_per_period = v;
        }
        if let Some(v) = self.initial_populations {
            base.initial_populations = v;
        }
        Ok(base)
    }
}

/// Loads a config file (JSON), rejecting unknown keys.
pub fn load<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
}

//! Experiment configuration documents.
//!
//! A configuration is a JSON object. Everything except `scenario` has a
//! default:
//!
//! ```json
//! {
//!   "scenario": "xp_entanglement",
//!   "waist": 1.0,
//!   "photons": 1e6,
//!   "lo_photons": 1e8,
//!   "squeezing": { "r1": 0.5, "r2": 0.5, "angle1": 0.0, "angle2": 0.0 },
//!   "truncation": 8,
//!   "sweep": { "parameter": "r", "start": 0.0, "stop": 2.0, "steps": 21 },
//!   "monte_carlo": { "shots": 100000, "seed": 42 },
//!   "output": { "path": "xp.csv", "format": "csv" }
//! }
//! ```

use crate::detection::LO_DOMINANCE;
use crate::error::ConfigError;
use crate::gaussian::MAX_SQUEEZING;
use crate::modes::DEFAULT_TRUNCATION;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_WAIST: f64 = 1.0;
pub const DEFAULT_PHOTONS: f64 = 1e6;
pub const DEFAULT_LO_PHOTONS: f64 = 1e8;
pub const DEFAULT_SHOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    XpEntanglement,
    SplitEntanglement,
    PositionReadoutDemo,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::XpEntanglement => "xp_entanglement",
            Scenario::SplitEntanglement => "split_entanglement",
            Scenario::PositionReadoutDemo => "position_readout_demo",
        }
    }

    /// Whether the scenario reads out through a homodyne local oscillator.
    pub fn uses_homodyne(self) -> bool {
        !matches!(self, Scenario::SplitEntanglement)
    }
}

impl FromStr for Scenario {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "xp_entanglement" => Ok(Scenario::XpEntanglement),
            "split_entanglement" => Ok(Scenario::SplitEntanglement),
            "position_readout_demo" => Ok(Scenario::PositionReadoutDemo),
            other => Err(ConfigError::field(
                "scenario",
                format!(
                    "unknown scenario `{other}` (expected xp_entanglement, split_entanglement or position_readout_demo)"
                ),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(ConfigError::field("output.format", format!("unknown format `{other}`"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Squeezing {
    #[serde(default)]
    pub r1: f64,
    #[serde(default)]
    pub r2: f64,
    #[serde(default)]
    pub angle1: f64,
    #[serde(default)]
    pub angle2: f64,
}

impl Default for Squeezing {
    fn default() -> Self {
        Self {
            r1: 0.0,
            r2: 0.0,
            angle1: 0.0,
            angle2: 0.0,
        }
    }
}

/// Parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Both squeezing parameters together.
    R,
    R1,
    R2,
    /// Photon number; the LO photon number keeps its ratio to it.
    Photons,
    Waist,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Sweep {
    /// Evenly spaced values from `start` to `stop` inclusive.
    pub fn schedule(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarlo {
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_shots() -> usize {
    DEFAULT_SHOTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: String,
    pub format: ReportFormat,
}

/// Validated experiment configuration with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub waist: f64,
    pub photons: f64,
    pub lo_photons: f64,
    pub squeezing: Squeezing,
    pub truncation: usize,
    pub sweep: Option<Sweep>,
    pub monte_carlo: Option<MonteCarlo>,
    pub output: OutputSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<String>,
    format: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: String,
    waist: Option<f64>,
    photons: Option<f64>,
    lo_photons: Option<f64>,
    squeezing: Option<Squeezing>,
    truncation: Option<usize>,
    sweep: Option<Sweep>,
    monte_carlo: Option<MonteCarlo>,
    output: Option<RawOutput>,
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let scenario: Scenario = raw.scenario.parse()?;
    let format = match raw.output.as_ref().and_then(|o| o.format.as_deref()) {
        Some(f) => f.parse()?,
        None => ReportFormat::Json,
    };
    let path = raw
        .output
        .and_then(|o| o.path)
        .unwrap_or_else(|| format!("report.{}", format.extension()));
    let config = ExperimentConfig {
        scenario,
        waist: raw.waist.unwrap_or(DEFAULT_WAIST),
        photons: raw.photons.unwrap_or(DEFAULT_PHOTONS),
        lo_photons: raw.lo_photons.unwrap_or(DEFAULT_LO_PHOTONS),
        squeezing: raw.squeezing.unwrap_or_default(),
        truncation: raw.truncation.unwrap_or(DEFAULT_TRUNCATION),
        sweep: raw.sweep,
        monte_carlo: raw.monte_carlo,
        output: OutputSpec { path, format },
    };
    config.validate()?;
    Ok(config)
}

fn positive(field: &'static str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::field(field, format!("must be positive, got {v}")))
    }
}

fn squeezing_in_range(field: &'static str, r: f64) -> Result<(), ConfigError> {
    if r.is_finite() && (0.0..=MAX_SQUEEZING).contains(&r) {
        Ok(())
    } else {
        Err(ConfigError::field(
            field,
            format!("must lie in [0, {MAX_SQUEEZING}], got {r}"),
        ))
    }
}

impl ExperimentConfig {
    /// Checks every invariant; also applied to each sweep point by the runner.
    pub fn validate(&self) -> Result<(), ConfigError> {
        positive("waist", self.waist)?;
        positive("photons", self.photons)?;
        positive("lo_photons", self.lo_photons)?;
        if self.scenario.uses_homodyne() && self.lo_photons < LO_DOMINANCE * self.photons {
            return Err(ConfigError::field(
                "lo_photons",
                format!(
                    "local oscillator regime requires lo_photons ≥ {LO_DOMINANCE}·photons ({} < {})",
                    self.lo_photons,
                    LO_DOMINANCE * self.photons
                ),
            ));
        }
        squeezing_in_range("squeezing.r1", self.squeezing.r1)?;
        squeezing_in_range("squeezing.r2", self.squeezing.r2)?;
        for (field, a) in [
            ("squeezing.angle1", self.squeezing.angle1),
            ("squeezing.angle2", self.squeezing.angle2),
        ] {
            if !a.is_finite() {
                return Err(ConfigError::field(field, "must be finite"));
            }
        }
        if self.truncation < 2 {
            return Err(ConfigError::field(
                "truncation",
                format!("must be at least 2, got {}", self.truncation),
            ));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.steps < 1 {
                return Err(ConfigError::field("sweep.steps", "must be at least 1"));
            }
            if !sweep.start.is_finite() || !sweep.stop.is_finite() {
                return Err(ConfigError::field("sweep", "start and stop must be finite"));
            }
            for v in [sweep.start, sweep.stop] {
                match sweep.parameter {
                    SweepParameter::R | SweepParameter::R1 | SweepParameter::R2 => squeezing_in_range("sweep", v)?,
                    SweepParameter::Photons | SweepParameter::Waist => positive("sweep", v)?,
                }
            }
        }
        if let Some(mc) = &self.monte_carlo {
            if mc.shots < 2 {
                return Err(ConfigError::field("monte_carlo.shots", "must be at least 2"));
            }
        }
        if self.output.path.is_empty() {
            return Err(ConfigError::field("output.path", "must not be empty"));
        }
        Ok(())
    }

    /// Copy of this configuration with one sweep parameter set to `value`.
    pub fn at(&self, parameter: SweepParameter, value: f64) -> ExperimentConfig {
        let mut c = self.clone();
        match parameter {
            SweepParameter::R => {
                c.squeezing.r1 = value;
                c.squeezing.r2 = value;
            }
            SweepParameter::R1 => c.squeezing.r1 = value,
            SweepParameter::R2 => c.squeezing.r2 = value,
            SweepParameter::Photons => {
                c.lo_photons *= value / c.photons;
                c.photons = value;
            }
            SweepParameter::Waist => c.waist = value,
        }
        c
    }
}

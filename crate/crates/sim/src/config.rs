//! Run configuration.
//!
//! A configuration is a single JSON document:
//!
//! ```json
//! {
//!   "mode": "sweep",
//!   "setup": {
//!     "S1": {"R": 0.5, "phase_r": 0.0, "phase_t": 0.0, "phase_global": 0.0},
//!     "S2": {"R": 0.5},
//!     "S3": {"R": 0.5},
//!     "S4": {"R": 0.5},
//!     "delta_phi": 3.141592653589793,
//!     "input_mzi": "alpha",
//!     "input_det": "gamma"
//!   },
//!   "sweep": {"parameter": "phi", "start": 0.0, "stop": 6.283185307179586, "points": 16, "shots": 0},
//!   "sample": {"shots": 100000, "seed": 7},
//!   "bias": {"voltage_volts": 1e-6, "dimensionless": true},
//!   "duality": {"leads": "alpha_gamma", "dephasing": {"sigma": 1.0, "ensemble": 10000, "seed": 0}},
//!   "output": {"path": "out.csv", "format": "csv"}
//! }
//! ```
//!
//! Angles are radians, the field is in tesla and areas in square metres.
//! Splitter phases default to zero; omitting `S4` gives the single-splitter
//! detector. Exactly one of `delta_phi` and `geometry`
//! (`{"H_tesla": .., "delta_area_m2": ..}`) must be present.

use std::path::PathBuf;

use eraser_core::dephasing::DephasingModel;
use eraser_core::{
    BeamSplitterSpec, BiasConfig, DetLead, DeviceSpec, FieldGeometry, Interaction, LeadPair,
    MziLead, SweepParameter,
};
use serde::Deserialize;

use crate::error::ConfigError;
use crate::output::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Eval,
    Sweep,
    Sample,
    Duality,
    VerifyOracle,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Option<Mode>,
    setup: RawSetup,
    sweep: Option<RawSweep>,
    sample: Option<RawSample>,
    bias: Option<RawBias>,
    duality: Option<RawDuality>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawSetup {
    S1: RawSplitter,
    S2: RawSplitter,
    S3: RawSplitter,
    S4: Option<RawSplitter>,
    delta_phi: Option<f64>,
    geometry: Option<RawGeometry>,
    #[serde(default)]
    input_mzi: InputMzi,
    #[serde(default)]
    input_det: InputDet,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSplitter {
    #[serde(rename = "R")]
    reflectance: f64,
    #[serde(default)]
    phase_r: f64,
    #[serde(default)]
    phase_t: f64,
    #[serde(default)]
    phase_global: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawGeometry {
    H_tesla: f64,
    delta_area_m2: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum InputMzi {
    #[default]
    Alpha,
    Beta,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum InputDet {
    #[default]
    Gamma,
    Delta,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: String,
    start: f64,
    stop: f64,
    points: usize,
    #[serde(default)]
    shots: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSample {
    shots: u64,
    #[serde(default)]
    seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBias {
    #[serde(default)]
    voltage_volts: f64,
    #[serde(default = "default_true")]
    dimensionless: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDuality {
    leads: Option<String>,
    dephasing: Option<RawDephasing>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDephasing {
    sigma: f64,
    ensemble: usize,
    #[serde(default)]
    seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
    #[serde(default)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub shots: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub shots: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityConfig {
    pub leads: LeadPair,
    pub dephasing: Option<DephasingModel>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputConfig {
    /// `None` writes to stdout.
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub device: DeviceSpec,
    pub sweep: Option<SweepConfig>,
    pub sample: Option<SampleConfig>,
    pub bias: BiasConfig,
    pub duality: DualityConfig,
    pub output: OutputConfig,
}

/// Command-line overrides applied on top of a parsed configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub delta_phi: Option<f64>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn range(path: impl Into<String>, message: impl ToString) -> ConfigError {
    ConfigError::Range {
        path: path.into(),
        message: message.to_string(),
    }
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn splitter(raw: &RawSplitter, name: &str) -> Result<BeamSplitterSpec, ConfigError> {
    let base = format!("setup.{name}");
    for (value, field) in [
        (raw.reflectance, "R"),
        (raw.phase_r, "phase_r"),
        (raw.phase_t, "phase_t"),
        (raw.phase_global, "phase_global"),
    ] {
        if !value.is_finite() {
            return Err(range(format!("{base}.{field}"), "value must be finite"));
        }
    }
    BeamSplitterSpec::new(raw.reflectance, raw.phase_r, raw.phase_t, raw.phase_global)
        .map_err(|e| range(format!("{base}.R"), e))
}

pub fn parse_sweep_parameter(name: &str) -> Option<SweepParameter> {
    Some(match name {
        "phi" => SweepParameter::MziPhase,
        "phi_d" => SweepParameter::DetectorPhase,
        "delta_phi" => SweepParameter::DeltaPhi,
        "R1" => SweepParameter::Reflectance(1),
        "R2" => SweepParameter::Reflectance(2),
        "R3" => SweepParameter::Reflectance(3),
        "R4" => SweepParameter::Reflectance(4),
        "H" => SweepParameter::Field,
        _ => return None,
    })
}

pub fn sweep_parameter_name(p: SweepParameter) -> &'static str {
    match p {
        SweepParameter::MziPhase => "phi",
        SweepParameter::DetectorPhase => "phi_d",
        SweepParameter::DeltaPhi => "delta_phi",
        SweepParameter::Reflectance(1) => "R1",
        SweepParameter::Reflectance(2) => "R2",
        SweepParameter::Reflectance(3) => "R3",
        SweepParameter::Reflectance(_) => "R4",
        SweepParameter::Field => "H",
    }
}

pub fn parse_leads(name: &str) -> Option<LeadPair> {
    Some(match name {
        "alpha_gamma" => LeadPair::ALPHA_GAMMA,
        "alpha_delta" => LeadPair::ALPHA_DELTA,
        "beta_gamma" => LeadPair::BETA_GAMMA,
        "beta_delta" => LeadPair::BETA_DELTA,
        _ => return None,
    })
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with(text, &Overrides::default())
}

/// Parse, apply command-line overrides, then validate.
pub fn parse_config_with(text: &str, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    let syntax = |e: serde_json::Error| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    };
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawConfig = match serde_path_to_error::deserialize(&mut de) {
        Ok(raw) => raw,
        Err(err) => {
            let path = err.path().to_string();
            let inner = err.into_inner();
            return Err(if inner.is_data() {
                schema(path, inner.to_string())
            } else {
                syntax(inner)
            });
        }
    };
    de.end().map_err(syntax)?;
    validate(raw, overrides)
}

fn validate(raw: RawConfig, ov: &Overrides) -> Result<RunConfig, ConfigError> {
    let mode = ov
        .mode
        .or(raw.mode)
        .ok_or_else(|| schema("mode", "no mode given in the config or on the command line"))?;

    let s = &raw.setup;
    let s4 = match &s.S4 {
        Some(r) => splitter(r, "S4")?,
        None => BeamSplitterSpec::reflecting(),
    };
    let splitters = [
        splitter(&s.S1, "S1")?,
        splitter(&s.S2, "S2")?,
        splitter(&s.S3, "S3")?,
        s4,
    ];

    let interaction = match (ov.delta_phi, s.delta_phi, &s.geometry) {
        (Some(dphi), _, _) => {
            if !dphi.is_finite() {
                return Err(range("--delta-phi", "value must be finite"));
            }
            Interaction::Phase(dphi)
        }
        (None, Some(_), Some(_)) => return Err(ConfigError::Conflict(
            "setup: exactly one of `setup.delta_phi` and `setup.geometry` may be given, found both"
                .into(),
        )),
        (None, None, None) => {
            return Err(ConfigError::Conflict(
                "setup: one of `setup.delta_phi` or `setup.geometry` is required".into(),
            ))
        }
        (None, Some(dphi), None) => {
            if !dphi.is_finite() {
                return Err(range("setup.delta_phi", "value must be finite"));
            }
            Interaction::Phase(dphi)
        }
        (None, None, Some(g)) => {
            if !(g.H_tesla.is_finite() && g.H_tesla >= 0.0) {
                return Err(range("setup.geometry.H_tesla", "must be finite and >= 0"));
            }
            if !(g.delta_area_m2.is_finite() && g.delta_area_m2 >= 0.0) {
                return Err(range(
                    "setup.geometry.delta_area_m2",
                    "must be finite and >= 0",
                ));
            }
            let geometry = FieldGeometry::new(g.H_tesla, g.delta_area_m2)
                .map_err(|e| range("setup.geometry", e))?;
            Interaction::Geometry(geometry)
        }
    };

    let device = DeviceSpec {
        splitters,
        interaction,
        input_mzi: match s.input_mzi {
            InputMzi::Alpha => MziLead::Alpha,
            InputMzi::Beta => MziLead::Beta,
        },
        input_det: match s.input_det {
            InputDet::Gamma => DetLead::Gamma,
            InputDet::Delta => DetLead::Delta,
        },
    };

    let sweep = match &raw.sweep {
        Some(sw) => {
            let parameter = parse_sweep_parameter(&sw.parameter).ok_or_else(|| {
                schema(
                    "sweep.parameter",
                    format!(
                        "unknown parameter `{}` (expected phi, phi_d, delta_phi, R1..R4 or H)",
                        sw.parameter
                    ),
                )
            })?;
            if parameter == SweepParameter::Field
                && !matches!(interaction, Interaction::Geometry(_))
            {
                return Err(schema(
                    "sweep.parameter",
                    "sweeping H requires `setup.geometry`",
                ));
            }
            if !sw.start.is_finite() {
                return Err(range("sweep.start", "value must be finite"));
            }
            if !sw.stop.is_finite() {
                return Err(range("sweep.stop", "value must be finite"));
            }
            if sw.points == 0 {
                return Err(range("sweep.points", "must be at least 1"));
            }
            if sw.points > 1 && sw.stop <= sw.start {
                return Err(range("sweep.stop", "must exceed sweep.start"));
            }
            Some(SweepConfig {
                parameter,
                start: sw.start,
                stop: sw.stop,
                points: sw.points,
                shots: ov.shots.unwrap_or(sw.shots),
            })
        }
        None => None,
    };

    let sample = match (&raw.sample, ov.shots) {
        (Some(sa), _) => Some(SampleConfig {
            shots: ov.shots.unwrap_or(sa.shots),
            seed: ov.seed.unwrap_or(sa.seed),
        }),
        (None, Some(shots)) if mode == Mode::Sample => Some(SampleConfig {
            shots,
            seed: ov.seed.unwrap_or(0),
        }),
        (None, _) => ov.seed.map(|seed| SampleConfig { shots: 0, seed }),
    };
    if mode == Mode::Sample {
        match sample {
            None => return Err(ConfigError::Missing("sample".into())),
            Some(sa) if sa.shots == 0 => return Err(range("sample.shots", "must be at least 1")),
            _ => {}
        }
    }
    if mode == Mode::Sweep && sweep.is_none() {
        return Err(ConfigError::Missing("sweep".into()));
    }

    let bias = match &raw.bias {
        None => BiasConfig::dimensionless(),
        Some(b) => {
            if !(b.voltage_volts.is_finite() && b.voltage_volts >= 0.0) {
                return Err(range("bias.voltage_volts", "must be finite and >= 0"));
            }
            if b.dimensionless {
                BiasConfig::dimensionless()
            } else {
                BiasConfig::si(b.voltage_volts).map_err(|e| range("bias.voltage_volts", e))?
            }
        }
    };

    let duality = match &raw.duality {
        None => DualityConfig {
            leads: LeadPair::ALPHA_GAMMA,
            dephasing: None,
        },
        Some(d) => {
            let leads = match &d.leads {
                None => LeadPair::ALPHA_GAMMA,
                Some(name) => parse_leads(name).ok_or_else(|| {
                    schema(
                        "duality.leads",
                        format!("unknown lead pair `{name}` (expected alpha_gamma, alpha_delta, beta_gamma or beta_delta)"),
                    )
                })?,
            };
            let dephasing = match &d.dephasing {
                None => None,
                Some(dp) => {
                    if !(dp.sigma.is_finite() && dp.sigma >= 0.0) {
                        return Err(range("duality.dephasing.sigma", "must be finite and >= 0"));
                    }
                    if dp.ensemble == 0 {
                        return Err(range("duality.dephasing.ensemble", "must be at least 1"));
                    }
                    Some(
                        DephasingModel::new(dp.sigma, dp.ensemble, ov.seed.unwrap_or(dp.seed))
                            .map_err(|e| range("duality.dephasing", e))?,
                    )
                }
            };
            DualityConfig { leads, dephasing }
        }
    };

    let mut output = match raw.output {
        None => OutputConfig::default(),
        Some(o) => OutputConfig {
            path: o.path,
            format: o.format,
        },
    };
    if let Some(out) = &ov.out {
        output.path = Some(out.clone());
    }
    if let Some(format) = ov.format {
        output.format = format;
    }

    Ok(RunConfig {
        mode,
        device,
        sweep,
        sample,
        bias,
        duality,
        output,
    })
}

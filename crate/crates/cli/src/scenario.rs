//! JSON scenario files: a dimension, a list of states, a list of measurements and
//! the joint-uncertainty kind.
//!
//! ```json
//! {
//!   "dimension": 4,
//!   "states": [{ "theta_deg": 45, "phi_deg": 0 }, { "amplitudes": [[1, 0], [0, 0], [0, 0], [0, 0]] }],
//!   "measurements": ["A", "B"],
//!   "kind": "DS",
//!   "lambda": 0.5
//! }
//! ```

use std::path::Path;

use majur::bounds::MurSetting;
use majur::numerics::{HermitianOperator, C64};
use majur::quantum::{Measurement, PureState};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "DP")]
    Dp,
    #[serde(rename = "DS")]
    Ds,
    #[serde(rename = "DP_MULTI")]
    DpMulti,
    #[serde(rename = "DS_MULTI")]
    DsMulti,
}

impl Kind {
    pub fn is_product(self) -> bool {
        matches!(self, Kind::Dp | Kind::DpMulti)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Angles {
        theta_deg: f64,
        phi_deg: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Amplitudes {
        amplitudes: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasurementSpec {
    Builtin(String),
    /// One matrix per outcome, rows of `[re, im]` entries.
    Explicit {
        label: String,
        effects: Vec<Vec<Vec<[f64; 2]>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub dimension: usize,
    #[serde(default)]
    pub states: Vec<StateSpec>,
    pub measurements: Vec<MeasurementSpec>,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

/// A scenario with every reference resolved and validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub kind: Kind,
    pub states: Vec<(String, PureState)>,
    pub setting: MurSetting,
    /// `lambda` for two-measurement direct sums.
    pub lambda: Option<f64>,
}

fn input(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{path}: {msg}"))
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { "scenario".to_string() } else { path };
            input(&path, e.inner())
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let d = self.dimension;
        if d < 2 {
            return Err(input("dimension", "must be at least 2"));
        }
        let measurements = self
            .measurements
            .iter()
            .enumerate()
            .map(|(i, spec)| resolve_measurement(&format!("measurements[{i}]"), spec, d))
            .collect::<Result<Vec<_>, _>>()?;
        let count = measurements.len();
        match self.kind {
            Kind::Dp | Kind::Ds if count != 2 => {
                return Err(input(
                    "measurements",
                    format!("kind {:?} needs exactly 2, found {count}", self.kind),
                ))
            }
            Kind::DpMulti | Kind::DsMulti if count < 2 => {
                return Err(input(
                    "measurements",
                    format!("kind {:?} needs at least 2, found {count}", self.kind),
                ))
            }
            _ => {}
        }
        let states = self
            .states
            .iter()
            .enumerate()
            .map(|(i, spec)| resolve_state(&format!("states[{i}]"), i, spec, d))
            .collect::<Result<Vec<_>, _>>()?;
        let (setting, lambda) = match self.kind {
            Kind::Dp | Kind::DpMulti => (MurSetting::product(measurements), None),
            Kind::Ds => {
                let lambda = self.lambda.unwrap_or(0.5);
                if !(lambda > 0.0 && lambda <= 1.0) {
                    return Err(input("lambda", format!("{lambda} is outside (0, 1]")));
                }
                (MurSetting::sum(measurements, vec![lambda, 1.0 - lambda]), Some(lambda))
            }
            Kind::DsMulti => {
                let weights = self.weights.clone().unwrap_or_else(|| vec![1.0 / count as f64; count]);
                let sum: f64 = weights.iter().sum();
                if weights.len() != count || weights.iter().any(|w| w.is_nan() || *w < 0.0) || (sum - 1.0).abs() > 1e-9
                {
                    return Err(input(
                        "weights",
                        format!("need {count} non-negative weights summing to 1, got {weights:?}"),
                    ));
                }
                (MurSetting::sum(measurements, weights), None)
            }
        };
        Ok(Resolved {
            kind: self.kind,
            states,
            setting,
            lambda,
        })
    }
}

fn resolve_measurement(path: &str, spec: &MeasurementSpec, d: usize) -> Result<Measurement, CliError> {
    let m = match spec {
        MeasurementSpec::Builtin(name) => Measurement::builtin(name).map_err(|e| input(path, e))?,
        MeasurementSpec::Explicit { label, effects } => {
            let ops = effects
                .iter()
                .enumerate()
                .map(|(j, rows)| {
                    let rows: Vec<Vec<C64>> = rows
                        .iter()
                        .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
                        .collect();
                    HermitianOperator::from_rows(&rows).map_err(|e| input(&format!("{path}.effects[{j}]"), e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Measurement::new(label.clone(), ops).map_err(|e| input(path, e))?
        }
    };
    if m.dim() != d {
        return Err(input(
            path,
            format!("acts on dimension {}, scenario dimension is {d}", m.dim()),
        ));
    }
    Ok(m)
}

fn resolve_state(path: &str, index: usize, spec: &StateSpec, d: usize) -> Result<(String, PureState), CliError> {
    match spec {
        StateSpec::Angles {
            theta_deg,
            phi_deg,
            label,
        } => {
            if d != 4 {
                return Err(input(path, "angle states are defined in dimension 4 only"));
            }
            if !theta_deg.is_finite() || !phi_deg.is_finite() {
                return Err(input(path, "angles must be finite"));
            }
            let label = label
                .clone()
                .unwrap_or_else(|| format!("theta{theta_deg}_phi{phi_deg}"));
            Ok((label, PureState::from_angles_deg(*theta_deg, *phi_deg)))
        }
        StateSpec::Amplitudes { amplitudes, label } => {
            if amplitudes.len() != d {
                return Err(input(
                    path,
                    format!("{} amplitudes for dimension {d}", amplitudes.len()),
                ));
            }
            let v = amplitudes.iter().map(|&[re, im]| C64::new(re, im)).collect();
            let state = PureState::new(v).map_err(|e| input(path, e))?;
            Ok((label.clone().unwrap_or_else(|| format!("state{index}")), state))
        }
    }
}

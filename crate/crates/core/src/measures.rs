//! Schur-concave uncertainty measures and the gap between a joint uncertainty
//! and its bound.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundOptions, MurSetting};
use crate::error::{Error, Result};
use crate::lattice::WeightVector;
use crate::quantum::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Shannon entropy in bits.
    Shannon,
    /// `U = total - max`.
    U,
    /// `V = sum log2 x_i`.
    V,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Shannon, Measure::U, Measure::V];

    pub fn evaluate(self, x: &WeightVector) -> Result<f64> {
        match self {
            Measure::Shannon => Ok(shannon_entropy(x)),
            Measure::U => Ok(measure_u(x)),
            Measure::V => measure_v(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub measure: Measure,
    pub value: f64,
}

/// `-sum x_i log2 x_i` with `0 log 0 = 0`. Unnormalized vectors are not rescaled.
pub fn shannon_entropy(x: &WeightVector) -> f64 {
    shannon_bits(x.components())
}

pub fn shannon_bits(x: &[f64]) -> f64 {
    x.iter().filter(|v| **v > 0.0).map(|v| -v * v.log2()).sum()
}

pub fn measure_u(x: &WeightVector) -> f64 {
    x.total() - x.get(0)
}

pub fn measure_v(x: &WeightVector) -> Result<f64> {
    if let Some(i) = x.components().iter().position(|v| *v <= 0.0) {
        return Err(Error::ZeroComponent(i));
    }
    Ok(x.components().iter().map(|v| v.log2()).sum())
}

/// `measure(joint) - measure(F(bound))`; `None` where the measure is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyGap {
    pub measure: Measure,
    pub xi_ds: Option<f64>,
    pub xi_dp: Option<f64>,
}

fn gap(measure: Measure, joint: &WeightVector, bound: &WeightVector) -> Option<f64> {
    Some(measure.evaluate(joint).ok()? - measure.evaluate(bound).ok()?)
}

/// `xi_DS` and `xi_DP` per measure for one state.
pub fn uncertainty_gaps(
    state: &PureState,
    sum_setting: &MurSetting,
    product_setting: &MurSetting,
    opts: &BoundOptions,
) -> Result<Vec<UncertaintyGap>> {
    let ds_joint = sum_setting.joint(state)?;
    let ds_bound = sum_setting.bound(opts)?.flattened;
    let dp_joint = product_setting.joint(state)?;
    let dp_bound = product_setting.bound(opts)?.flattened;
    Ok(Measure::ALL
        .iter()
        .map(|&measure| UncertaintyGap {
            measure,
            xi_ds: gap(measure, &ds_joint, &ds_bound),
            xi_dp: gap(measure, &dp_joint, &dp_bound),
        })
        .collect())
}

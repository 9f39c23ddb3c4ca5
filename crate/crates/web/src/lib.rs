//! wasm-bindgen exports for the static page in `www/`. Every function returns a
//! JSON string; failures come back as `{"error": "..."}`.

use majur::bounds::{verify_against, BoundOptions, MurSetting};
use majur::game::{simulate, GameConfig, GameKind};
use majur::lattice::{flatten, lorenz_curve, LorenzCurve};
use majur::quantum::{Measurement, PureState};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn ab() -> Vec<Measurement> {
    vec![
        Measurement::builtin("A").expect("builtin"),
        Measurement::builtin("B").expect("builtin"),
    ]
}

fn points(curve: &LorenzCurve) -> Vec<[f64; 2]> {
    curve.points().iter().map(|&(k, h)| [k as f64, h]).collect()
}

fn respond(result: Result<Value, String>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn panel(state: &PureState, setting: &MurSetting) -> Result<Value, String> {
    let bound = setting.bound(&BoundOptions::default()).map_err(|e| e.to_string())?;
    let v = verify_against(state, setting, bound).map_err(|e| e.to_string())?;
    let curves: Vec<Value> = v
        .curves
        .iter()
        .map(|(label, c)| json!({ "label": label, "points": points(c) }))
        .collect();
    Ok(json!({ "curves": curves, "holds": v.holds(), "joint": v.joint.components() }))
}

/// Lorenz curves of `p⊗q` and `λp⊕(1-λ)q` for `|ψ_{θ,φ}⟩` under A and B, with
/// their bounds.
#[wasm_bindgen]
pub fn lorenz_two(theta_deg: f64, phi_deg: f64, lambda: f64) -> String {
    respond((|| {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(format!("lambda {lambda} is outside (0, 1]"));
        }
        let state = PureState::from_angles_deg(theta_deg, phi_deg);
        Ok(json!({
            "product": panel(&state, &MurSetting::product(ab()))?,
            "sum": panel(&state, &MurSetting::sum(ab(), vec![lambda, 1.0 - lambda]))?,
        }))
    })())
}

/// Flattens a list of non-negative numbers separated by commas or whitespace.
#[wasm_bindgen]
pub fn flatten_vector(text: &str) -> String {
    respond((|| {
        let values = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| format!("not a number: {s:?}")))
            .collect::<Result<Vec<f64>, _>>()?;
        let flat = flatten(&values).map_err(|e| e.to_string())?;
        let mut cumulative = Vec::with_capacity(values.len() + 1);
        let mut acc = 0.0;
        cumulative.push([0.0, 0.0]);
        for (k, v) in values.iter().enumerate() {
            acc += v;
            cumulative.push([(k + 1) as f64, acc]);
        }
        Ok(json!({
            "input": values,
            "flattened": flat.components(),
            "input_points": cumulative,
            "flattened_points": points(&lorenz_curve(&flat)),
        }))
    })())
}

/// Runs the guessing game; `kind` is `"DP"` or `"DS"`.
#[wasm_bindgen]
pub fn simulate_game(
    kind: &str,
    theta_deg: f64,
    phi_deg: f64,
    lambda: f64,
    k: usize,
    trials: u32,
    seed: u32,
) -> String {
    respond((|| {
        let kind = match kind {
            "DP" => GameKind::DirectProduct,
            "DS" => GameKind::DirectSum,
            other => return Err(format!("unknown game kind {other:?}")),
        };
        let ms = ab();
        let config = GameConfig {
            kind,
            state: PureState::from_angles_deg(theta_deg, phi_deg),
            measurements: (ms[0].clone(), ms[1].clone()),
            lambda,
            trials: u64::from(trials),
            seed: u64::from(seed),
            k,
            workers: 1,
        };
        let r = simulate(&config, &BoundOptions::default()).map_err(|e| e.to_string())?;
        serde_json::to_value(r).map_err(|e| e.to_string())
    })())
}

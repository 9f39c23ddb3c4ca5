//! Number formatting and Lorenz-curve CSV output.

use std::path::Path;

use majur::bounds::{BoundVector, MurSetting};
use majur::lattice::{lorenz_curve, LorenzCurve};
use majur::quantum::PureState;

use crate::error::CliError;

/// Fixed notation with 15 significant digits, scientific outside `[1e-5, 1e15)`.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        format!("{:.*}", (14 - exp) as usize, x)
    } else {
        format!("{x:.14e}")
    }
}

/// `(a, b, c)` with four decimals.
pub fn four_decimals(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("({})", parts.join(", "))
}

/// `[a, b, c]` at full precision.
pub fn full_precision(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| sig15(*x)).collect();
    format!("[{}]", parts.join(", "))
}

/// Drops trailing zeros (within `1e-12`) but keeps at least one entry.
pub fn trim_zeros(v: &[f64]) -> &[f64] {
    let keep = v.iter().rposition(|x| x.abs() > 1e-12).map_or(1, |i| i + 1);
    &v[..keep.min(v.len())]
}

/// One curve per state, then the sorted raw bound and its flattening.
pub fn lorenz_curves(
    states: &[(String, PureState)],
    setting: &MurSetting,
    bound: &BoundVector,
) -> Result<Vec<(String, LorenzCurve)>, CliError> {
    let mut curves = Vec::with_capacity(states.len() + 2);
    for (label, state) in states {
        let joint = setting.joint(state).map_err(|e| CliError::from_core(label, e))?;
        curves.push((label.clone(), lorenz_curve(&joint)));
    }
    let symbol = bound.kind.symbol();
    curves.push((symbol.to_string(), lorenz_curve(&bound.raw_sorted())));
    curves.push((format!("F({symbol})"), lorenz_curve(&bound.flattened)));
    Ok(curves)
}

pub fn lorenz_csv(curves: &[(String, LorenzCurve)]) -> String {
    let mut out = String::from("label,k,height\n");
    for (label, curve) in curves {
        for &(k, h) in curve.points() {
            out.push_str(&format!("{label},{k},{}\n", sig15(h)));
        }
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

//! Reference values for the built-in measurements, recomputed and compared.

use majur::bounds::{dp_bound_t, dp_multi_bound, ds_bound_s, ds_multi_bound, BoundOptions};
use majur::lattice::flatten;
use majur::measures::shannon_entropy;
use majur::quantum::Measurement;
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub check: &'static str,
    pub computed: Vec<f64>,
    pub target: Vec<f64>,
    pub tolerance: f64,
    pub max_error: f64,
    pub pass: bool,
}

fn row(check: &'static str, computed: &[f64], target: &[f64], tolerance: f64) -> Row {
    let computed: Vec<f64> = computed.iter().copied().take(target.len()).collect();
    let max_error = if computed.len() < target.len() {
        f64::INFINITY
    } else {
        computed
            .iter()
            .zip(target)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    Row {
        check,
        computed,
        target: target.to_vec(),
        tolerance,
        max_error,
        pass: max_error <= tolerance,
    }
}

fn core(context: &str) -> impl Fn(majur::Error) -> CliError + '_ {
    move |e| CliError::from_core(context, e)
}

/// Recomputes every reference value from `a`, `b` and the builtin `C1..C3`.
/// Passing a perturbed `a` or `b` shows which rows depend on them.
pub fn reference_rows(
    a: &Measurement,
    b: &Measurement,
    tol_override: Option<f64>,
    opts: &BoundOptions,
) -> Result<Vec<Row>, CliError> {
    let tol = |default: f64| tol_override.unwrap_or(default);
    let cs: Vec<Measurement> = ["C1", "C2", "C3"]
        .iter()
        .map(|n| Measurement::builtin(n).expect("builtin"))
        .collect();

    let t = dp_bound_t(a, b, opts).map_err(core("t"))?;
    let flat_t = flatten(&t.raw).map_err(core("F(t)"))?;
    let s = ds_bound_s(a, b, 0.5, opts).map_err(core("s(1/2)"))?;
    let two_s: Vec<f64> = s.raw.iter().map(|x| 2.0 * x).collect();
    let two_flat_s: Vec<f64> = s.flattened.components().iter().map(|x| 2.0 * x).collect();
    let t_multi = dp_multi_bound(&cs, opts).map_err(core("t'"))?;
    let s_multi = ds_multi_bound(&cs, &[1.0 / 3.0; 3], opts).map_err(core("s'"))?;
    let three_s = s_multi.flattened.scaled(3.0).map_err(core("3F(s')"))?;

    // most targets are rounded to four decimals; the flattened pairs are exact
    Ok(vec![
        row("t (DPMUR, A,B)", &t.raw, &[0.5625, 0.1661, 0.2714], tol(5e-5)),
        row("F(t)", flat_t.components(), &[0.5625, 0.21875, 0.21875], tol(1e-9)),
        row("2s(1/2) entries 2-4", &two_s[1..], &[0.5, 0.2071, 0.2929], tol(5e-5)),
        row(
            "2F(s(1/2)) entries 2-4",
            &two_flat_s[1..],
            &[0.5, 0.25, 0.25],
            tol(1e-9),
        ),
        row(
            "F(t') (C1,C2,C3)",
            t_multi.flattened.components(),
            &[0.7773, 0.2227],
            tol(5e-5),
        ),
        row(
            "3F(s'(1/3))",
            three_s.components(),
            &[1.0, 1.0, 0.7583, 0.2417],
            tol(5e-5),
        ),
        row("H(F(t'))", &[shannon_entropy(&t_multi.flattened)], &[0.7651], tol(2e-4)),
        row("H(3F(s'))", &[shannon_entropy(&three_s)], &[0.7979], tol(2e-4)),
    ])
}

pub fn builtin_rows(tol_override: Option<f64>, opts: &BoundOptions) -> Result<Vec<Row>, CliError> {
    let a = Measurement::builtin("A").expect("builtin");
    let b = Measurement::builtin("B").expect("builtin");
    reference_rows(&a, &b, tol_override, opts)
}

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::time::Instant;

use majur::bounds::{
    dp_bound_t, dp_multi_bound, ds_bound_s, ds_multi_bound, estimate_r, verify_against, BoundOptions, BoundVector,
    MurSetting, RSearch,
};
use majur::game::{simulate, GameConfig, GameKind};
use majur::lattice::{flatten, is_majorized_by, lorenz_curve, WeightVector};
use majur::measures::{measure_u, shannon_bits, shannon_entropy};
use majur::numerics::C64;
use majur::quantum::{concatenation, direct_product, Measurement, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn m(name: &str) -> Measurement {
    Measurement::builtin(name).unwrap()
}

fn opts() -> BoundOptions {
    BoundOptions::default()
}

fn close_all(label: &str, got: &[f64], want: &[f64], tol: f64) -> Check {
    if got.len() < want.len() {
        return Err(format!("{label}: {got:?} shorter than {want:?}"));
    }
    let err = got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if err <= tol {
        Ok(format!("{label} max err {err:.2e} <= {tol:.0e}"))
    } else {
        Err(format!("{label}: {got:?} vs {want:?} (max err {err:.2e} > {tol:.0e})"))
    }
}

fn both(a: Check, b: Check) -> Check {
    Ok(format!("{}; {}", a?, b?))
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> PureState {
    let v = (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    PureState::normalized(v).unwrap()
}

fn c1() -> Check {
    let t = dp_bound_t(&m("A"), &m("B"), &opts()).map_err(|e| e.to_string())?;
    let leading = close_all("t[..3]", &t.raw, &[0.5625, 0.1661, 0.2714], 5e-5);
    let flat_of_t = flatten(&t.raw).map_err(|e| e.to_string())?;
    let flat = close_all("F(t)[..3]", flat_of_t.components(), &[0.5625, 0.21875, 0.21875], 1e-9);
    both(leading, flat)
}

fn c2() -> Check {
    let s = ds_bound_s(&m("A"), &m("B"), 0.5, &opts()).map_err(|e| e.to_string())?;
    let doubled: Vec<f64> = s.raw.iter().map(|x| 2.0 * x).collect();
    let full = close_all("2s(1/2)", &doubled, &[1.0, 0.5, 0.2071, 0.2929, 0., 0., 0., 0.], 5e-5);
    let suffix = close_all("2s(1/2)[1..4]", &doubled[1..], &[0.5, 0.2071, 0.2929], 5e-5);
    let flat: Vec<f64> = s.flattened.components().iter().map(|x| 2.0 * x).collect();
    let flat = close_all("2F(s(1/2))", &flat, &[1.0, 0.5, 0.25, 0.25, 0., 0., 0., 0.], 1e-9);
    both(both(full, suffix), flat)
}

fn three() -> Vec<Measurement> {
    ["C1", "C2", "C3"].iter().map(|n| m(n)).collect()
}

fn c3() -> Check {
    let t = dp_multi_bound(&three(), &opts()).map_err(|e| e.to_string())?;
    let f = t.flattened.components();
    both(
        close_all("F(t')", f, &[0.7773, 0.2227], 5e-5),
        close_all("F(t') tail", &f[2..], &vec![0.0; f.len() - 2], 1e-12),
    )
}

fn c4() -> Check {
    let s = ds_multi_bound(&three(), &[1.0 / 3.0; 3], &opts()).map_err(|e| e.to_string())?;
    let tripled: Vec<f64> = s.flattened.components().iter().map(|x| 3.0 * x).collect();
    both(
        close_all("3F(s')", &tripled, &[1.0, 1.0, 0.7583, 0.2417], 5e-5),
        close_all("3F(s') tail", &tripled[4..], &vec![0.0; tripled.len() - 4], 1e-12),
    )
}

fn c5() -> Check {
    let t = dp_multi_bound(&three(), &opts()).map_err(|e| e.to_string())?;
    let s = ds_multi_bound(&three(), &[1.0 / 3.0; 3], &opts()).map_err(|e| e.to_string())?;
    let h_t = shannon_entropy(&t.flattened);
    let h_s = shannon_entropy(&s.flattened.scaled(3.0).map_err(|e| e.to_string())?);
    both(
        close_all("H(F(t'))", &[h_t], &[0.7651], 2e-4),
        close_all("H(3F(s'))", &[h_s], &[0.7979], 2e-4),
    )
}

fn grid(fixed_theta: Option<f64>, fixed_phi: Option<f64>) -> Vec<PureState> {
    (0..10)
        .map(|i| {
            let v = 10.0 * i as f64;
            PureState::from_angles_deg(fixed_theta.unwrap_or(v), fixed_phi.unwrap_or(v))
        })
        .collect()
}

fn curve_dominated(setting: &MurSetting, bound: &BoundVector, states: &[PureState]) -> Result<usize, String> {
    let upper = lorenz_curve(&bound.flattened);
    let mut checked = 0;
    for state in states {
        let verdict = verify_against(state, setting, bound.clone()).map_err(|e| e.to_string())?;
        let lower = lorenz_curve(&verdict.joint);
        let n = lower.len().max(upper.len());
        for k in 0..n {
            for x in [k as f64, k as f64 + 0.5] {
                if lower.height_at(x) > upper.height_at(x) + 1e-9 {
                    return Err(format!("curve above bound at x = {x} for {state:?}"));
                }
            }
        }
        if !verdict.holds() {
            return Err(format!("chain fails for {state:?}"));
        }
        checked += 1;
    }
    Ok(checked)
}

fn c6() -> Check {
    let two = vec![m("A"), m("B")];
    let mut two_states = grid(Some(45.0), None);
    two_states.extend(grid(None, Some(45.0)));
    let mut three_states = grid(Some(180.0), None);
    three_states.extend(grid(None, Some(90.0)));
    let settings = [
        (MurSetting::product(two.clone()), &two_states),
        (MurSetting::sum(two, vec![0.5, 0.5]), &two_states),
        (MurSetting::product(three()), &three_states),
        (MurSetting::sum(three(), vec![1.0 / 3.0; 3]), &three_states),
    ];
    let mut total = 0;
    for (setting, states) in &settings {
        let bound = setting.bound(&opts()).map_err(|e| e.to_string())?;
        total += curve_dominated(setting, &bound, states)?;
    }
    Ok(format!("{total} state curves under their F-bounds"))
}

/// Least concave majorant of `(k, Y_k)` by an upper-hull monotone stack; returns
/// the slope on each unit interval.
fn hull_increments(y: &[f64]) -> Vec<f64> {
    let mut pts = vec![(0.0, 0.0)];
    let mut acc = 0.0;
    for (k, v) in y.iter().enumerate() {
        acc += v;
        pts.push(((k + 1) as f64, acc));
    }
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or below the chord a -> p
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(y.len());
    for w in hull.windows(2) {
        let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        for _ in 0..(w[1].0 - w[0].0) as usize {
            out.push(slope);
        }
    }
    out
}

fn c7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let trials = 100_000;
    for trial in 0..trials {
        let n = rng.random_range(1..=12);
        let y: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random::<f64>() })
            .collect();
        if y.iter().sum::<f64>() <= 0.0 {
            continue;
        }
        let f = flatten(&y).map_err(|e| e.to_string())?;
        let fc = f.components();
        let oracle = hull_increments(&y);
        let err = fc.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if err > 1e-10 {
            return Err(format!("trial {trial}: {y:?} -> {fc:?} vs hull {oracle:?}"));
        }
        if fc.windows(2).any(|w| w[1] > w[0]) {
            return Err(format!("trial {trial}: not non-increasing {fc:?}"));
        }
        if (f.total() - y.iter().sum::<f64>()).abs() > 1e-10 {
            return Err(format!("trial {trial}: total changed"));
        }
        let again = flatten(fc).map_err(|e| e.to_string())?;
        if again.components().iter().zip(fc).any(|(a, b)| (a - b).abs() > 1e-12) {
            return Err(format!("trial {trial}: not idempotent"));
        }
        for c in [0.5, 2.0, 3.0] {
            let scaled: Vec<f64> = y.iter().map(|v| c * v).collect();
            let fs = flatten(&scaled).map_err(|e| e.to_string())?;
            if fs.components().iter().zip(fc).any(|(a, b)| (a - c * b).abs() > 1e-10) {
                return Err(format!("trial {trial}: not scalar-equivariant at c = {c}"));
            }
        }
    }
    Ok(format!("{trials} random increment vectors"))
}

fn c8() -> Check {
    let (a, b) = (m("A"), m("B"));
    let t = dp_bound_t(&a, &b, &opts()).map_err(|e| e.to_string())?;
    let s = ds_bound_s(&a, &b, 0.5, &opts()).map_err(|e| e.to_string())?;
    let dp = MurSetting::product(vec![a.clone(), b.clone()]);
    let ds = MurSetting::sum(vec![a, b], vec![0.5, 0.5]);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut violations = 0;
    for _ in 0..1000 {
        let psi = random_state(&mut rng, 4);
        for (setting, bound) in [(&dp, &t), (&ds, &s)] {
            let v = verify_against(&psi, setting, bound.clone()).map_err(|e| e.to_string())?;
            violations += v.chain.iter().filter(|l| !l.holds).count();
        }
    }
    if violations == 0 {
        Ok("1000 random states, both chains hold".into())
    } else {
        Err(format!("{violations} chain violations"))
    }
}

fn random_probability(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|x| x / sum).collect()
}

fn c9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let (np, nq) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let p = random_probability(&mut rng, np);
        let q = random_probability(&mut rng, nq);
        let (hp, hq) = (shannon_bits(&p), shannon_bits(&q));
        let hpq = shannon_entropy(&direct_product(&p, &q).map_err(|e| e.to_string())?);
        let hsum = shannon_entropy(&concatenation(&[p.clone(), q.clone()]).map_err(|e| e.to_string())?);
        if (hpq - hp - hq).abs() > 1e-9 || (hsum - hp - hq).abs() > 1e-9 {
            return Err(format!("super-additivity fails for {p:?}, {q:?}"));
        }
    }
    for _ in 0..10_000 {
        let n = rng.random_range(2..=8);
        let y = WeightVector::new(random_probability(&mut rng, n)).unwrap();
        // two rounds of random pairwise averaging (T-transforms) keep x ≺ y
        let mut x = y.components().to_vec();
        for _ in 0..2 {
            let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
            let w = rng.random::<f64>();
            let (xi, xj) = (x[i], x[j]);
            x[i] = w * xi + (1.0 - w) * xj;
            x[j] = w * xj + (1.0 - w) * xi;
        }
        let x = flatten(WeightVector::new(x).unwrap().components()).unwrap();
        if !is_majorized_by(&x, &y).unwrap() {
            return Err("constructed pair is not comparable".into());
        }
        if shannon_entropy(&x) < shannon_entropy(&y) - 1e-9 || measure_u(&x) < measure_u(&y) - 1e-9 {
            return Err(format!("Schur-concavity fails for {x:?} ≺ {y:?}"));
        }
    }
    Ok("1000 super-additivity pairs, 10000 Schur-concavity pairs".into())
}

/// `<psi|E|psi>` summed entry by entry, kept apart from the library's Born rule.
fn born_by_hand(psi: &PureState, meas: &Measurement) -> Vec<f64> {
    let a = psi.amplitudes();
    meas.effects()
        .iter()
        .map(|e| {
            let mut acc = C64::new(0.0, 0.0);
            for (i, ai) in a.iter().enumerate() {
                for (j, aj) in a.iter().enumerate() {
                    acc += ai.conj() * e.get(i, j) * aj;
                }
            }
            acc.re
        })
        .collect()
}

fn c10() -> Check {
    let psi = PureState::from_angles_deg(45.0, 45.0);
    let top = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
    let dp_exact = top(born_by_hand(&psi, &m("A"))) * top(born_by_hand(&psi, &m("B")));
    let configs = [
        (
            "DS lambda=1 |0> k=1",
            GameKind::DirectSum,
            PureState::basis(4, 0),
            1.0,
            1.0,
        ),
        ("DP psi(45,45) k=1", GameKind::DirectProduct, psi, 0.5, dp_exact),
        (
            "DS lambda=1/2 |0> k=1",
            GameKind::DirectSum,
            PureState::basis(4, 0),
            0.5,
            0.5,
        ),
    ];
    let mut lines = Vec::new();
    for (label, kind, state, lambda, exact) in configs {
        let cfg = GameConfig {
            kind,
            state,
            measurements: (m("A"), m("B")),
            lambda,
            trials: 1_000_000,
            seed: 42,
            k: 1,
            workers: 1,
        };
        let r = simulate(&cfg, &opts()).map_err(|e| e.to_string())?;
        let four_sigma = 4.0 * r.std_error;
        if r.empirical_top_k > r.bound_value + four_sigma {
            return Err(format!(
                "{label}: {} exceeds bound {}",
                r.empirical_top_k, r.bound_value
            ));
        }
        if (r.empirical_top_k - exact).abs() > four_sigma || (r.exact_top_k - exact).abs() > 1e-12 {
            return Err(format!(
                "{label}: {} vs exact {exact} (4σ = {four_sigma:.1e})",
                r.empirical_top_k
            ));
        }
        lines.push(format!("{label}: {:.5}", r.empirical_top_k));
    }
    Ok(lines.join(", "))
}

fn c11() -> Check {
    let (a, b) = (m("A"), m("B"));
    let t = dp_bound_t(&a, &b, &opts()).map_err(|e| e.to_string())?;
    let mut states = grid(Some(45.0), None);
    states.extend(grid(None, Some(45.0)));
    // best top-k value over the grid, per k
    let mut grid_best = [0.0f64; 16];
    for s in &states {
        let joint = MurSetting::product(vec![a.clone(), b.clone()])
            .joint(s)
            .map_err(|e| e.to_string())?;
        for (k, h) in joint.partial_sums(16).iter().enumerate() {
            grid_best[k] = grid_best[k].max(*h);
        }
    }
    for seed in 0..10 {
        let search = RSearch {
            restarts: 4,
            steps: 200,
            seed,
        };
        let r = estimate_r(&a, &b, &search, &states).map_err(|e| e.to_string())?;
        let caps = t.cumulative.partial_sums();
        for (k, (&est, &best)) in r.cumulative.partial_sums().iter().zip(&grid_best).enumerate() {
            if est > caps[k] + 1e-8 {
                return Err(format!("seed {seed}, k = {}: {est} above T_k", k + 1));
            }
            if est < best - 1e-12 {
                return Err(format!("seed {seed}, k = {}: {est} below grid best {best}", k + 1));
            }
        }
    }
    Ok("10 seeds bracketed by grid best and T_k".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 DPMUR bound t and F(t) for (A,B)", c1),
        ("2 DSMUR bound 2s(1/2) and 2F(s(1/2)) for (A,B)", c2),
        ("3 multi-measurement F(t') for (C1,C2,C3)", c3),
        ("4 multi-measurement 3F(s'(1/3)) for (C1,C2,C3)", c4),
        ("5 entropic bounds H(F(t')), H(3F(s'))", c5),
        ("6 Lorenz dominance on the theta/phi grids", c6),
        ("7 flatness process vs concave-majorant oracle", c7),
        ("8 random-state MUR chains", c8),
        ("9 super-additivity and Schur-concavity", c9),
        ("10 guessing-game consistency", c10),
        ("11 estimate_r bracketing", c11),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  [{secs:6.2}s] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  [{secs:6.2}s] {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

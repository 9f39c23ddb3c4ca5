//! Seeded Monte Carlo simulation of the guessing games behind the two joint
//! uncertainties.
//!
//! Randomness comes from ChaCha8 (`rand_chacha` 0.9, `ChaCha8Rng::seed_from_u64`);
//! outcomes are drawn by inverse-CDF lookup over the outcome list in
//! measurement order. Worker `w` uses the seed `seed + w`, so results depend on
//! the worker count but are reproducible for a fixed count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{dp_bound_t, ds_bound_s, BoundOptions};
use crate::error::{Error, Result};
use crate::quantum::{born_probabilities, Measurement, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GameKind {
    /// Two separate boxes, both measured every round; Bob guesses outcome pairs.
    DirectProduct,
    /// A coin picks which measurement runs; Bob guesses tagged outcomes.
    DirectSum,
}

#[derive(Debug, Clone)]
pub struct GameConfig {
    pub kind: GameKind,
    pub state: PureState,
    pub measurements: (Measurement, Measurement),
    /// Probability of measuring the first measurement (direct sum only).
    pub lambda: f64,
    pub trials: u64,
    pub seed: u64,
    pub k: usize,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameResult {
    /// Win frequency of Bob's fixed guess: the `k` most probable outcomes of the
    /// exact distribution (ties by outcome index).
    pub empirical_top_k: f64,
    /// Sum of the `k` largest empirical frequencies.
    pub histogram_top_k: f64,
    /// Exact success probability of Bob's guess.
    pub exact_top_k: f64,
    pub counts: Vec<u64>,
    /// Cumulative bound: `T_k` for the direct product, `S_k` for the direct sum.
    pub bound_value: f64,
    pub std_error: f64,
}

/// Exact outcome distribution: pairs `(a, b)` row-major for the direct product,
/// first-measurement outcomes then second for the direct sum.
pub fn outcome_distribution(config: &GameConfig) -> Result<Vec<f64>> {
    let (m, n) = &config.measurements;
    let p = born_probabilities(&config.state, m)?;
    let q = born_probabilities(&config.state, n)?;
    Ok(match config.kind {
        GameKind::DirectProduct => p.iter().flat_map(|a| q.iter().map(move |b| a * b)).collect(),
        GameKind::DirectSum => p
            .iter()
            .map(|a| config.lambda * a)
            .chain(q.iter().map(|b| (1.0 - config.lambda) * b))
            .collect(),
    })
}

fn cdf(probabilities: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probabilities
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

/// First index whose cumulative weight exceeds `u`; falls back to the last
/// outcome with positive weight when round-off leaves `u` past the end.
fn sample(cdf: &[f64], u: f64) -> usize {
    let i = cdf.partition_point(|c| *c <= u);
    if i < cdf.len() {
        return i;
    }
    let total = *cdf.last().expect("non-empty");
    cdf.iter().position(|c| *c >= total).expect("total is attained")
}

fn validate(config: &GameConfig, outcomes: usize) -> Result<()> {
    if config.trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if config.workers == 0 {
        return Err(Error::InvalidConfig("workers must be at least 1".into()));
    }
    if config.k == 0 || config.k > outcomes {
        return Err(Error::InvalidConfig(format!("k = {} outside 1..={outcomes}", config.k)));
    }
    if config.kind == GameKind::DirectSum && !(0.0..=1.0).contains(&config.lambda) {
        return Err(Error::LambdaOutOfRange(config.lambda));
    }
    Ok(())
}

fn run_worker(kind: GameKind, p_cdf: &[f64], q_cdf: &[f64], lambda: f64, trials: u64, seed: u64) -> Vec<u64> {
    let n = q_cdf.len();
    let mut counts = vec![0u64; p_cdf.len() * n];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let outcome = match kind {
            GameKind::DirectProduct => {
                let a = sample(p_cdf, rng.random::<f64>());
                let b = sample(q_cdf, rng.random::<f64>());
                a * n + b
            }
            GameKind::DirectSum => {
                if rng.random::<f64>() < lambda {
                    sample(p_cdf, rng.random::<f64>())
                } else {
                    p_cdf.len() + sample(q_cdf, rng.random::<f64>())
                }
            }
        };
        counts[outcome] += 1;
    }
    counts
}

pub fn simulate(config: &GameConfig, opts: &BoundOptions) -> Result<GameResult> {
    let (m, n) = &config.measurements;
    let exact = outcome_distribution(config)?;
    validate(config, exact.len())?;
    let p_cdf = cdf(&born_probabilities(&config.state, m)?);
    let q_cdf = cdf(&born_probabilities(&config.state, n)?);

    let workers = config.workers as u64;
    let base = config.trials / workers;
    let extra = config.trials % workers;
    let shares: Vec<(u64, u64)> = (0..workers)
        .map(|w| (base + u64::from(w < extra), config.seed.wrapping_add(w)))
        .collect();
    let partials: Vec<Vec<u64>> = if workers == 1 {
        vec![run_worker(
            config.kind,
            &p_cdf,
            &q_cdf,
            config.lambda,
            shares[0].0,
            shares[0].1,
        )]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = shares
                .iter()
                .map(|&(trials, seed)| {
                    let (p_cdf, q_cdf) = (&p_cdf, &q_cdf);
                    scope.spawn(move || run_worker(config.kind, p_cdf, q_cdf, config.lambda, trials, seed))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("game worker panicked"))
                .collect()
        })
    };
    let mut counts = vec![0u64; exact.len()];
    for part in &partials {
        for (c, x) in counts.iter_mut().zip(part) {
            *c += x;
        }
    }

    let mut order: Vec<usize> = (0..exact.len()).collect();
    order.sort_by(|&a, &b| exact[b].total_cmp(&exact[a]).then(a.cmp(&b)));
    let guess = &order[..config.k];
    let trials = config.trials as f64;
    let empirical_top_k = guess.iter().map(|&i| counts[i]).sum::<u64>() as f64 / trials;
    let exact_top_k = guess.iter().map(|&i| exact[i]).sum();
    let mut sorted_counts = counts.clone();
    sorted_counts.sort_unstable_by(|a, b| b.cmp(a));
    let histogram_top_k = sorted_counts[..config.k].iter().sum::<u64>() as f64 / trials;

    let bound = match config.kind {
        GameKind::DirectProduct => dp_bound_t(m, n, opts)?,
        GameKind::DirectSum => {
            if config.lambda > 0.0 {
                ds_bound_s(m, n, config.lambda, opts)?
            } else {
                // lambda = 0 only runs the second measurement
                ds_bound_s(n, m, 1.0, opts)?
            }
        }
    };
    let bound_value = bound.cumulative.partial_sums()[config.k - 1];
    let std_error = (empirical_top_k * (1.0 - empirical_top_k) / trials).sqrt();
    Ok(GameResult {
        empirical_top_k,
        histogram_top_k,
        exact_top_k,
        counts,
        bound_value,
        std_error,
    })
}

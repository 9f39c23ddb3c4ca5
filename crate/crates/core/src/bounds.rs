//! Eigenvalue-optimization bounds on joint uncertainty vectors.
//!
//! Every bound here is a maximum of `lambda_1` over sums of measurement effects
//! drawn from index subsets. Subsets are enumerated exhaustively, grouped by
//! total size and processed in ascending size, so enumeration can stop as soon
//! as the cumulative bound hits its cap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{flatten, is_majorized_by, lorenz_curve, CumulativeVector, LorenzCurve, WeightVector};
use crate::numerics::{max_eigenvalue, weighted_sum, HermitianOperator, C64};
use crate::quantum::{
    born_probabilities, check_weights, direct_product_all, direct_sum_weighted, Measurement, PureState,
};

const CAP: f64 = 1.0;
const CAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `t`, two-measurement direct product.
    T,
    /// `s(lambda)`, two-measurement direct sum.
    S,
    /// `t'`, direct product over any number of measurements.
    TMulti,
    /// `s'(c)`, weighted direct sum over any number of measurements.
    SMulti,
    /// Heuristic lower estimate of the optimal direct-product bound `r`.
    REstimate,
}

impl BoundKind {
    pub fn symbol(self) -> &'static str {
        match self {
            BoundKind::T => "t",
            BoundKind::S => "s",
            BoundKind::TMulti => "t'",
            BoundKind::SMulti => "s'",
            BoundKind::REstimate => "r~",
        }
    }
}

/// A bound in three views: the raw increments `T_k - T_{k-1}` (not necessarily
/// sorted), their partial sums, and the flattened optimal vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundVector {
    pub kind: BoundKind,
    pub raw: Vec<f64>,
    pub cumulative: CumulativeVector,
    pub flattened: WeightVector,
    /// `lambda` for `s`, the weights `c` for `s'`.
    pub parameters: Option<Vec<f64>>,
}

impl BoundVector {
    /// Builds the bound from partial maxima `T_1, ..., T_n`; negative increments
    /// from round-off are clamped to zero.
    fn from_partial_maxima(kind: BoundKind, maxima: &[f64], parameters: Option<Vec<f64>>) -> Result<Self> {
        let mut prev = 0.0;
        let raw: Vec<f64> = maxima
            .iter()
            .map(|t| {
                let inc = (t - prev).max(0.0);
                prev = prev.max(*t);
                inc
            })
            .collect();
        Ok(Self {
            kind,
            cumulative: CumulativeVector::from_increments(&raw)?,
            flattened: flatten(&raw)?,
            raw,
            parameters,
        })
    }

    /// Raw increments as a (sorted) weight vector, the form majorization compares.
    pub fn raw_sorted(&self) -> WeightVector {
        WeightVector::new(self.raw.clone()).expect("raw increments are non-negative with positive total")
    }

    pub fn total(&self) -> f64 {
        self.cumulative.total()
    }
}

/// Limit on the number of `lambda_1` evaluations a subset search may need.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetBudget {
    max_evaluations: u64,
}

impl SubsetBudget {
    pub const DEFAULT: u64 = 1_000_000;

    pub fn new(max_evaluations: u64) -> Result<Self> {
        if max_evaluations == 0 {
            return Err(Error::InvalidConfig("subset budget must be at least 1".into()));
        }
        Ok(Self { max_evaluations })
    }

    pub fn unlimited() -> Self {
        Self {
            max_evaluations: u64::MAX,
        }
    }

    pub fn max_evaluations(self) -> u64 {
        self.max_evaluations
    }
}

impl Default for SubsetBudget {
    fn default() -> Self {
        Self {
            max_evaluations: Self::DEFAULT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundOptions {
    pub budget: SubsetBudget,
    /// Worker threads for subset enumeration; results do not depend on it.
    pub jobs: usize,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            budget: SubsetBudget::default(),
            jobs: 1,
        }
    }
}

/// Exhaustive search over tuples of non-empty index subsets, one subset per
/// group, scoring `score(lambda_1(sum of chosen operators))`.
struct SubsetSearch<'a> {
    groups: Vec<Vec<HermitianOperator>>,
    score: &'a (dyn Fn(f64) -> f64 + Sync),
}

impl SubsetSearch<'_> {
    fn tuple_count(&self) -> u128 {
        self.groups.iter().fold(1u128, |acc, g| {
            let per_group = if g.len() >= 127 {
                u128::MAX
            } else {
                (1u128 << g.len()) - 1
            };
            acc.saturating_mul(per_group)
        })
    }

    /// Best score per total subset size; index `s` holds size `s`, `None` where
    /// the search stopped early or no tuple has that size.
    fn run(&self, opts: &BoundOptions) -> Result<Vec<Option<f64>>> {
        let required = self.tuple_count();
        if required > opts.budget.max_evaluations() as u128 {
            return Err(Error::BudgetExceeded {
                required,
                budget: opts.budget.max_evaluations(),
            });
        }
        let max_size: usize = self.groups.iter().map(Vec::len).sum();
        let mut buckets: Vec<Vec<Vec<u64>>> = vec![Vec::new(); max_size + 1];
        let mut tuple = vec![1u64; self.groups.len()];
        loop {
            let size: u32 = tuple.iter().map(|m| m.count_ones()).sum();
            buckets[size as usize].push(tuple.clone());
            // mixed-radix increment over masks 1..2^n_x
            let mut x = 0;
            loop {
                if x == tuple.len() {
                    break;
                }
                let limit = (1u64 << self.groups[x].len()) - 1;
                if tuple[x] < limit {
                    tuple[x] += 1;
                    break;
                }
                tuple[x] = 1;
                x += 1;
            }
            if x == tuple.len() {
                break;
            }
        }

        let mut best = vec![None; max_size + 1];
        let mut running = f64::NEG_INFINITY;
        for (size, bucket) in buckets.iter().enumerate() {
            if bucket.is_empty() {
                continue;
            }
            let value = self.bucket_max(bucket, opts.jobs.max(1))?;
            best[size] = Some(value);
            running = running.max(value);
            if running >= CAP - CAP_TOL {
                break;
            }
        }
        Ok(best)
    }

    fn bucket_max(&self, bucket: &[Vec<u64>], jobs: usize) -> Result<f64> {
        if jobs == 1 || bucket.len() < 2 * jobs {
            return self.chunk_max(bucket);
        }
        let chunk = bucket.len().div_ceil(jobs);
        let partials: Vec<Result<f64>> = std::thread::scope(|scope| {
            let handles: Vec<_> = bucket
                .chunks(chunk)
                .map(|part| scope.spawn(move || self.chunk_max(part)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("subset worker panicked"))
                .collect()
        });
        partials
            .into_iter()
            .try_fold(f64::NEG_INFINITY, |acc, r| Ok(acc.max(r?)))
    }

    fn chunk_max(&self, tuples: &[Vec<u64>]) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        let mut terms: Vec<(f64, &HermitianOperator)> = Vec::new();
        for tuple in tuples {
            terms.clear();
            for (group, mask) in self.groups.iter().zip(tuple) {
                for (i, op) in group.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        terms.push((1.0, op));
                    }
                }
            }
            let value = (self.score)(max_eigenvalue(&weighted_sum(&terms)?)?);
            best = best.max(value);
        }
        Ok(best)
    }
}

fn check_same_dim(ms: &[&Measurement]) -> Result<()> {
    let dim = ms[0].dim();
    for m in ms {
        if m.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.dim(),
            });
        }
    }
    Ok(())
}

/// Turns per-size maxima into `T_1..T_len` for `k = size - offset`, carrying the
/// running maximum forward and capping at 1.
fn partial_maxima(best: &[Option<f64>], offset: usize, len: usize) -> Vec<f64> {
    let mut running: f64 = 0.0;
    (1..=len)
        .map(|k| {
            match best.get(k + offset) {
                Some(Some(v)) => running = running.max(*v),
                _ if running >= CAP - CAP_TOL => running = CAP,
                _ => {}
            }
            running = running.min(CAP);
            running
        })
        .collect()
}

/// Direct-product bound for any number of measurements:
/// `T'_k = max (lambda_1(sum_x sum_{a in I_x} M_{a|x}) / n)^n` over non-empty
/// subsets with `sum_x |I_x| = k + n - 1`.
fn direct_product_bound(ms: &[&Measurement], kind: BoundKind, opts: &BoundOptions) -> Result<BoundVector> {
    if ms.len() < 2 {
        return Err(Error::InvalidConfig(
            "direct-product bound needs at least two measurements".into(),
        ));
    }
    check_same_dim(ms)?;
    let n = ms.len();
    let score = move |l: f64| (l / n as f64).powi(n as i32);
    let search = SubsetSearch {
        groups: ms.iter().map(|m| m.effects().to_vec()).collect(),
        score: &score,
    };
    let best = search.run(opts)?;
    let len = ms
        .iter()
        .try_fold(1usize, |acc, m| acc.checked_mul(m.outcome_count()))
        .ok_or_else(|| Error::InvalidConfig("outcome space too large".into()))?;
    BoundVector::from_partial_maxima(kind, &partial_maxima(&best, n - 1, len), None)
}

/// `t` for a pair of measurements (`k_1 + k_2 = k + 1`).
pub fn dp_bound_t(m: &Measurement, n: &Measurement, opts: &BoundOptions) -> Result<BoundVector> {
    direct_product_bound(&[m, n], BoundKind::T, opts)
}

/// `t'` for two or more measurements.
pub fn dp_multi_bound(ms: &[Measurement], opts: &BoundOptions) -> Result<BoundVector> {
    let refs: Vec<&Measurement> = ms.iter().collect();
    direct_product_bound(&refs, BoundKind::TMulti, opts)
}

fn direct_sum_bound(
    ms: &[&Measurement],
    weights: &[f64],
    kind: BoundKind,
    parameters: Vec<f64>,
    opts: &BoundOptions,
) -> Result<BoundVector> {
    if ms.is_empty() {
        return Err(Error::EmptySet);
    }
    check_weights(ms.len(), weights)?;
    check_same_dim(ms)?;
    let pooled: Vec<HermitianOperator> = ms
        .iter()
        .zip(weights)
        .flat_map(|(m, c)| m.effects().iter().map(move |e| e.scaled(*c)))
        .collect();
    let len = pooled.len();
    if len > 63 {
        return Err(Error::BudgetExceeded {
            required: u128::MAX,
            budget: opts.budget.max_evaluations(),
        });
    }
    let identity = |l: f64| l;
    let search = SubsetSearch {
        groups: vec![pooled],
        score: &identity,
    };
    let best = search.run(opts)?;
    BoundVector::from_partial_maxima(kind, &partial_maxima(&best, 0, len), Some(parameters))
}

/// `s(lambda)`: `S_k = max_{|I| = k} lambda_1(sum_{c in I} G_c(lambda))` with
/// `G_c = lambda M_c` for the first measurement and `(1 - lambda) N_c` for the second.
pub fn ds_bound_s(m: &Measurement, n: &Measurement, lambda: f64, opts: &BoundOptions) -> Result<BoundVector> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    direct_sum_bound(&[m, n], &[lambda, 1.0 - lambda], BoundKind::S, vec![lambda], opts)
}

/// `s'(c)` over the pooled list of weighted effects `c_x M_{a|x}`.
pub fn ds_multi_bound(ms: &[Measurement], weights: &[f64], opts: &BoundOptions) -> Result<BoundVector> {
    let refs: Vec<&Measurement> = ms.iter().collect();
    direct_sum_bound(&refs, weights, BoundKind::SMulti, weights.to_vec(), opts)
}

/// Parameters of the seeded local search behind [`estimate_r`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RSearch {
    pub restarts: usize,
    /// Maximum hill-climbing iterations per start.
    pub steps: usize,
    pub seed: u64,
}

impl Default for RSearch {
    fn default() -> Self {
        Self {
            restarts: 8,
            steps: 400,
            seed: 0,
        }
    }
}

const CLIMB_INITIAL_STEP: f64 = 0.5;
const CLIMB_DECAY: f64 = 0.5;
const CLIMB_FAILURES_PER_SCALE: usize = 10;
const CLIMB_SCALES: usize = 6;

fn top_k_sum(mut values: Vec<f64>, k: usize) -> f64 {
    values.sort_by(|a, b| b.total_cmp(a));
    values.iter().take(k).sum()
}

fn product_top_k(state: &[C64], m: &Measurement, n: &Measurement, k: usize) -> Result<f64> {
    let p: Vec<f64> = m
        .effects()
        .iter()
        .map(|e| e.expectation(state))
        .collect::<Result<_>>()?;
    let q: Vec<f64> = n
        .effects()
        .iter()
        .map(|e| e.expectation(state))
        .collect::<Result<_>>()?;
    let products = p.iter().flat_map(|a| q.iter().map(move |b| a * b)).collect();
    Ok(top_k_sum(products, k))
}

fn normalize(v: &mut [C64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
}

fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    normalize(&mut v);
    v
}

/// Leading eigenvector by power iteration; inputs here are positive semidefinite.
fn top_eigenvector(op: &HermitianOperator) -> Vec<C64> {
    let d = op.dim();
    let mut v: Vec<C64> = (0..d).map(|i| C64::new(1.0, 0.1 * (i + 1) as f64)).collect();
    normalize(&mut v);
    for _ in 0..200 {
        let mut w = vec![C64::new(0.0, 0.0); d];
        for (i, wi) in w.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *wi += op.get(i, j) * vj;
            }
        }
        if w.iter().map(|z| z.norm_sqr()).sum::<f64>() < 1e-24 {
            break;
        }
        normalize(&mut w);
        v = w;
    }
    v
}

/// Spherical perturbations with geometric step decay; the state is
/// re-normalized after every proposal.
fn hill_climb(
    start: Vec<C64>,
    objective: &dyn Fn(&[C64]) -> Result<f64>,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, Vec<C64>)> {
    let mut current = start;
    let mut value = objective(&current)?;
    let mut step = CLIMB_INITIAL_STEP;
    let mut failures = 0;
    let mut scales = 0;
    for _ in 0..steps {
        let mut proposal: Vec<C64> = current
            .iter()
            .map(|z| {
                z + C64::new(
                    rng.sample::<f64, _>(StandardNormal),
                    rng.sample::<f64, _>(StandardNormal),
                ) * step
            })
            .collect();
        normalize(&mut proposal);
        let candidate = objective(&proposal)?;
        if candidate > value {
            value = candidate;
            current = proposal;
            failures = 0;
        } else {
            failures += 1;
            if failures == CLIMB_FAILURES_PER_SCALE {
                failures = 0;
                step *= CLIMB_DECAY;
                scales += 1;
                if scales == CLIMB_SCALES {
                    break;
                }
            }
        }
    }
    Ok((value, current))
}

/// Heuristic lower estimate of `R_k = max_I max_rho sum_{(a,b) in I} p_a q_b`.
///
/// Starts include seeded random states (stream `seed + restart`), the leading
/// eigenvectors of every `M_a + N_b`, the caller's `extra_starts`, and the best
/// state found for `k - 1`; each is improved by hill-climbing. Every reported
/// value is attained by an actual state, so it never exceeds `R_k <= T_k`.
pub fn estimate_r(
    m: &Measurement,
    n: &Measurement,
    search: &RSearch,
    extra_starts: &[PureState],
) -> Result<BoundVector> {
    if search.restarts == 0 || search.steps == 0 {
        return Err(Error::InvalidConfig(
            "estimate_r needs restarts >= 1 and steps >= 1".into(),
        ));
    }
    check_same_dim(&[m, n])?;
    let dim = m.dim();
    for s in extra_starts {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.dim(),
            });
        }
    }
    let mut fixed_starts: Vec<Vec<C64>> = Vec::new();
    for ma in m.effects() {
        for nb in n.effects() {
            fixed_starts.push(top_eigenvector(&weighted_sum(&[(1.0, ma), (1.0, nb)])?));
        }
    }
    fixed_starts.extend(extra_starts.iter().map(|s| s.amplitudes().to_vec()));

    let len = m.outcome_count() * n.outcome_count();
    let mut maxima = Vec::with_capacity(len);
    let mut previous_best: Option<Vec<C64>> = None;
    for k in 1..=len {
        let objective = |v: &[C64]| product_top_k(v, m, n, k);
        let mut best = (f64::NEG_INFINITY, Vec::new());
        for restart in 0..search.restarts {
            let mut rng = ChaCha8Rng::seed_from_u64(search.seed.wrapping_add(restart as u64));
            rng.set_stream(k as u64);
            let start = random_state(dim, &mut rng);
            let found = hill_climb(start, &objective, search.steps, &mut rng)?;
            if found.0 > best.0 {
                best = found;
            }
        }
        // deterministic starts share one stream past the random restarts
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed.wrapping_add(search.restarts as u64));
        rng.set_stream(k as u64);
        for start in fixed_starts.iter().chain(previous_best.iter()) {
            let found = hill_climb(start.clone(), &objective, search.steps, &mut rng)?;
            if found.0 > best.0 {
                best = found;
            }
        }
        maxima.push(best.0.min(CAP));
        previous_best = Some(best.1);
    }
    BoundVector::from_partial_maxima(BoundKind::REstimate, &maxima, None)
}

/// How measurement outcomes are combined into one joint-uncertainty vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JointKind {
    /// Spatially separated: `⊗_x p_x`.
    Product,
    /// Temporally separated: `⊕_x c_x p_x`.
    Sum,
}

/// A set of measurements with the joint-uncertainty form under study.
#[derive(Debug, Clone, PartialEq)]
pub struct MurSetting {
    pub measurements: Vec<Measurement>,
    pub kind: JointKind,
    /// Mixing weights `c` for [`JointKind::Sum`] (`(lambda, 1 - lambda)` for two).
    pub weights: Option<Vec<f64>>,
}

impl MurSetting {
    pub fn product(measurements: Vec<Measurement>) -> Self {
        Self {
            measurements,
            kind: JointKind::Product,
            weights: None,
        }
    }

    pub fn sum(measurements: Vec<Measurement>, weights: Vec<f64>) -> Self {
        Self {
            measurements,
            kind: JointKind::Sum,
            weights: Some(weights),
        }
    }

    fn sum_weights(&self) -> Result<&[f64]> {
        self.weights
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("direct-sum setting needs weights".into()))
    }

    /// `t` / `s(lambda)` for two measurements, `t'` / `s'(c)` otherwise.
    pub fn bound(&self, opts: &BoundOptions) -> Result<BoundVector> {
        let ms = &self.measurements;
        match (self.kind, ms.len()) {
            (JointKind::Product, 2) => dp_bound_t(&ms[0], &ms[1], opts),
            (JointKind::Product, _) => dp_multi_bound(ms, opts),
            (JointKind::Sum, 2) => {
                let w = self.sum_weights()?;
                check_weights(2, w)?;
                ds_bound_s(&ms[0], &ms[1], w[0], opts)
            }
            (JointKind::Sum, _) => ds_multi_bound(ms, self.sum_weights()?, opts),
        }
    }

    pub fn probabilities(&self, state: &PureState) -> Result<Vec<Vec<f64>>> {
        self.measurements.iter().map(|m| born_probabilities(state, m)).collect()
    }

    pub fn joint(&self, state: &PureState) -> Result<WeightVector> {
        let ps = self.probabilities(state)?;
        match self.kind {
            JointKind::Product => direct_product_all(&ps),
            JointKind::Sum => direct_sum_weighted(&ps, self.sum_weights()?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainLink {
    pub lower: String,
    pub upper: String,
    pub holds: bool,
}

/// The majorization chain `joint ≺ F(bound) ≺ bound` for one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MurVerdict {
    pub joint: WeightVector,
    pub bound: BoundVector,
    pub chain: Vec<ChainLink>,
    pub curves: Vec<(String, LorenzCurve)>,
}

impl MurVerdict {
    pub fn holds(&self) -> bool {
        self.chain.iter().all(|l| l.holds)
    }
}

pub fn verify_mur(state: &PureState, setting: &MurSetting, opts: &BoundOptions) -> Result<MurVerdict> {
    let bound = setting.bound(opts)?;
    verify_against(state, setting, bound)
}

/// [`verify_mur`] with a precomputed bound.
pub fn verify_against(state: &PureState, setting: &MurSetting, bound: BoundVector) -> Result<MurVerdict> {
    let joint = setting.joint(state)?;
    let symbol = bound.kind.symbol();
    let flat_label = format!("F({symbol})");
    let raw = bound.raw_sorted();
    let chain = vec![
        ChainLink {
            lower: "joint".into(),
            upper: flat_label.clone(),
            holds: is_majorized_by(&joint, &bound.flattened)?,
        },
        ChainLink {
            lower: flat_label.clone(),
            upper: symbol.into(),
            holds: is_majorized_by(&bound.flattened, &raw)?,
        },
    ];
    let curves = vec![
        ("joint".to_string(), lorenz_curve(&joint)),
        (flat_label, lorenz_curve(&bound.flattened)),
        (symbol.to_string(), lorenz_curve(&raw)),
    ];
    Ok(MurVerdict {
        joint,
        bound,
        chain,
        curves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::projector_from_vector;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    fn opts() -> BoundOptions {
        BoundOptions::default()
    }

    fn qubit(label: &str, vectors: &[[f64; 2]]) -> Measurement {
        let vs: Vec<Vec<C64>> = vectors
            .iter()
            .map(|v| v.iter().map(|x| C64::new(*x, 0.0)).collect())
            .collect();
        Measurement::from_basis(label, &vs).unwrap()
    }

    #[test]
    fn t_for_mub_pair() {
        let a = Measurement::builtin("A").unwrap();
        let b = Measurement::builtin("B").unwrap();
        let t = dp_bound_t(&a, &b, &opts()).unwrap();
        assert_eq!(t.raw.len(), 16);
        let t2 = ((1.0 + 0.5f64.sqrt()) / 2.0).powi(2);
        assert_close(&t.raw[..4], &[0.5625, t2 - 0.5625, 1.0 - t2, 0.0], 1e-12);
        assert_close(&t.flattened.components()[..4], &[0.5625, 0.21875, 0.21875, 0.0], 1e-12);
        assert!((t.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn t_for_identical_measurements() {
        let a = Measurement::builtin("A").unwrap();
        let t = dp_bound_t(&a, &a, &opts()).unwrap();
        assert!((t.raw[0] - 1.0).abs() < 1e-12);
        assert!(t.raw[1..].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn t_for_qubit_z_and_x() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = qubit("Z", &[[1., 0.], [0., 1.]]);
        let x = qubit("X", &[[h, h], [h, -h]]);
        let t = dp_bound_t(&z, &x, &opts()).unwrap();
        let t1 = ((1.0 + h) / 2.0).powi(2);
        assert_close(&t.raw, &[t1, 1.0 - t1, 0.0, 0.0], 1e-12);
    }

    #[test]
    fn s_for_mub_pair() {
        let a = Measurement::builtin("A").unwrap();
        let b = Measurement::builtin("B").unwrap();
        let s = ds_bound_s(&a, &b, 0.5, &opts()).unwrap();
        let third = (1.0 + 0.5f64.sqrt()) / 2.0 - 0.75;
        assert_close(&s.raw, &[0.5, 0.25, third, 0.25 - third, 0., 0., 0., 0.], 1e-12);
        assert_close(&s.flattened.components()[..4], &[0.5, 0.25, 0.125, 0.125], 1e-12);
        assert_eq!(s.parameters, Some(vec![0.5]));
    }

    #[test]
    fn s_degenerate_cases() {
        let a = Measurement::builtin("A").unwrap();
        let b = Measurement::builtin("B").unwrap();
        let s = ds_bound_s(&a, &b, 1.0, &opts()).unwrap();
        assert!((s.raw[0] - 1.0).abs() < 1e-12 && s.raw[1..].iter().all(|x| x.abs() < 1e-12));
        let s = ds_bound_s(&a, &a, 0.5, &opts()).unwrap();
        assert_close(&s.raw[..3], &[0.5, 0.5, 0.0], 1e-12);
        assert_eq!(
            ds_bound_s(&a, &b, 0.0, &opts()).unwrap_err(),
            Error::LambdaOutOfRange(0.0)
        );
    }

    #[test]
    fn multi_bounds_match_two_measurement_forms() {
        let a = Measurement::builtin("A").unwrap();
        let b = Measurement::builtin("B").unwrap();
        let t = dp_bound_t(&a, &b, &opts()).unwrap();
        let tm = dp_multi_bound(&[a.clone(), b.clone()], &opts()).unwrap();
        assert_close(&t.raw, &tm.raw, 1e-10);
        let s = ds_bound_s(&a, &b, 0.5, &opts()).unwrap();
        let sm = ds_multi_bound(&[a.clone(), b], &[0.5, 0.5], &opts()).unwrap();
        assert_close(&s.raw, &sm.raw, 1e-10);
        let single = ds_multi_bound(&[a], &[1.0], &opts()).unwrap();
        assert!((single.raw[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multi_bounds_for_three_measurements() {
        let cs: Vec<Measurement> = ["C1", "C2", "C3"]
            .iter()
            .map(|n| Measurement::builtin(n).unwrap())
            .collect();
        let top = (3.0 + (9.0f64 - 8.0 / 3.0).sqrt()) / 2.0;
        let tm = dp_multi_bound(&cs, &opts()).unwrap();
        assert_eq!(tm.raw.len(), 64);
        assert!((tm.raw[0] - (top / 3.0).powi(3)).abs() < 1e-12);
        assert_close(
            &tm.flattened.trimmed(),
            &[(top / 3.0).powi(3), 1.0 - (top / 3.0).powi(3)],
            1e-12,
        );
        let third = 1.0 / 3.0;
        let sm = ds_multi_bound(&cs, &[third; 3], &opts()).unwrap();
        assert_close(
            &sm.flattened.trimmed(),
            &[third, third, (top - 2.0) / 3.0, (3.0 - top) / 3.0],
            1e-12,
        );
        assert!(matches!(
            ds_multi_bound(&cs, &[0.5, 0.5], &opts()),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn budget_guard() {
        let a = Measurement::builtin("A").unwrap();
        let b = Measurement::builtin("B").unwrap();
        let tight = BoundOptions {
            budget: SubsetBudget::new(100).unwrap(),
            jobs: 1,
        };
        assert_eq!(
            dp_bound_t(&a, &b, &tight).unwrap_err(),
            Error::BudgetExceeded {
                required: 225,
                budget: 100
            }
        );
        assert!(SubsetBudget::new(0).is_err());
    }

    #[test]
    fn parallel_matches_sequential_bitwise() {
        let cs: Vec<Measurement> = ["C1", "C2", "C3"]
            .iter()
            .map(|n| Measurement::builtin(n).unwrap())
            .collect();
        let seq = dp_multi_bound(&cs, &opts()).unwrap();
        let par = dp_multi_bound(&cs, &BoundOptions { jobs: 4, ..opts() }).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn effect_order_does_not_matter() {
        let a = Measurement::builtin("A").unwrap();
        let b = Measurement::builtin("B").unwrap();
        let b2 = b.permuted(&[2, 0, 3, 1]).unwrap();
        let t = dp_bound_t(&a, &b, &opts()).unwrap();
        let t2 = dp_bound_t(&b2, &a, &opts()).unwrap();
        assert_close(&t.raw, &t2.raw, 1e-10);
    }

    #[test]
    fn r_estimate_examples() {
        let a = Measurement::builtin("A").unwrap();
        let b = Measurement::builtin("B").unwrap();
        let search = RSearch {
            restarts: 2,
            steps: 100,
            seed: 7,
        };
        let r = estimate_r(&a, &a, &search, &[]).unwrap();
        assert!((r.cumulative.partial_sums()[0] - 1.0).abs() < 1e-6);
        let r = estimate_r(&a, &b, &search, &[]).unwrap();
        let r1 = r.cumulative.partial_sums()[0];
        assert!((0.5..=0.5625 + 1e-8).contains(&r1), "{r1}");
        let zero = RSearch { restarts: 0, ..search };
        assert!(matches!(estimate_r(&a, &b, &zero, &[]), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn verdict_examples() {
        let a = Measurement::builtin("A").unwrap();
        let b = Measurement::builtin("B").unwrap();
        let dp = MurSetting::product(vec![a.clone(), b.clone()]);
        let v = verify_mur(&PureState::basis(4, 0), &dp, &opts()).unwrap();
        assert_close(&v.joint.components()[..5], &[0.25, 0.25, 0.25, 0.25, 0.0], 1e-15);
        assert!(v.holds());
        assert_eq!(v.chain[0].upper, "F(t)");

        let same = MurSetting::product(vec![a.clone(), a.clone()]);
        let v = verify_mur(&PureState::from_angles(0.3, 1.1), &same, &opts()).unwrap();
        assert!(v.holds());

        let ds = MurSetting::sum(vec![a, b], vec![0.5, 0.5]);
        let psi = PureState::from_angles(std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4);
        let v = verify_mur(&psi, &ds, &opts()).unwrap();
        assert!(v.holds());
        assert_eq!(v.curves.len(), 3);
    }

    #[test]
    fn projectors_reach_cap_early() {
        // a measurement with a single effect (the identity) saturates at k = 1
        let id = Measurement::new("I", vec![projector_from_vector(&[C64::new(1.0, 0.0)]).unwrap()]).unwrap();
        let t = dp_bound_t(&id, &id, &opts()).unwrap();
        assert_eq!(t.raw, vec![1.0]);
    }
}

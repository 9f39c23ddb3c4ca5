//! Pure states, measurements, Born probabilities and joint-uncertainty vectors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::WeightVector;
use crate::numerics::{min_eigenvalue, projector_from_vector, weighted_sum, HermitianOperator, C64};

const NORM_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-9;
const COMPLETENESS_TOL: f64 = 1e-9;
const PROBABILITY_TOL: f64 = 1e-9;

/// Names accepted by [`Measurement::builtin`].
pub const BUILTIN_MEASUREMENTS: [&str; 5] = ["A", "B", "C1", "C2", "C3"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Accepts amplitudes that are already unit-norm within 1e-10.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidConfig("state must have at least one amplitude".into()));
        }
        if let Some(i) = amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { amplitudes })
    }

    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() {
            return Err(Error::NonFinite(0));
        }
        if norm < 1e-12 {
            return Err(Error::ZeroVector(norm));
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// `cos(theta) sin(phi)|0> + cos(theta) cos(phi)|1> + sin(theta)|2> + 0|3>`, radians.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            amplitudes: vec![
                C64::new(ct * sp, 0.0),
                C64::new(ct * cp, 0.0),
                C64::new(st, 0.0),
                C64::new(0.0, 0.0),
            ],
        }
    }

    pub fn from_angles_deg(theta_deg: f64, phi_deg: f64) -> Self {
        Self::from_angles(theta_deg.to_radians(), phi_deg.to_radians())
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

/// A POVM: positive effects summing to the identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    label: String,
    effects: Vec<HermitianOperator>,
}

impl Measurement {
    pub fn new(label: impl Into<String>, effects: Vec<HermitianOperator>) -> Result<Self> {
        let label = label.into();
        let first = effects.first().ok_or(Error::EmptySet)?;
        let dim = first.dim();
        for (index, e) in effects.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            let min_eigenvalue = min_eigenvalue(e)?;
            if min_eigenvalue < -POSITIVITY_TOL {
                return Err(Error::NotPositive {
                    label,
                    index,
                    min_eigenvalue,
                });
            }
        }
        let terms: Vec<(f64, &HermitianOperator)> = effects.iter().map(|e| (1.0, e)).collect();
        let deviation = weighted_sum(&terms)?.max_abs_diff(&HermitianOperator::identity(dim))?;
        if deviation > COMPLETENESS_TOL {
            return Err(Error::NotComplete { label, deviation });
        }
        Ok(Self { label, effects })
    }

    /// Rank-1 projective measurement onto the (normalized) given vectors.
    pub fn from_basis(label: impl Into<String>, vectors: &[Vec<C64>]) -> Result<Self> {
        let effects = vectors
            .iter()
            .map(|v| projector_from_vector(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, effects)
    }

    /// The two- and three-measurement settings of the photonic experiment in `d = 4`.
    pub fn builtin(name: &str) -> Result<Self> {
        let vectors = match name {
            "A" | "C1" => computational_basis(),
            "B" => mub_basis(),
            "C2" => {
                let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
                vec![
                    real(&[1., 0., 0., 0.]),
                    real(&[0., 0., 1. / s2, 1. / s2]),
                    real(&[0., 1. / s3, 1. / s3, -1. / s3]),
                    real(&[0., 2. / s6, -1. / s6, 1. / s6]),
                ]
            }
            "C3" => {
                let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
                vec![
                    real(&[0., 0., 1. / s2, 1. / s2]),
                    real(&[0., 1., 0., 0.]),
                    real(&[1. / s3, 0., 1. / s3, -1. / s3]),
                    real(&[2. / s6, 0., -1. / s6, 1. / s6]),
                ]
            }
            other => return Err(Error::UnknownMeasurement(other.to_string())),
        };
        Self::from_basis(name, &vectors)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn outcome_count(&self) -> usize {
        self.effects.len()
    }

    /// Same effects in a different order (`order[i]` is the source index).
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        Self::new(
            self.label.clone(),
            order.iter().map(|&i| self.effects[i].clone()).collect(),
        )
    }
}

fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|x| C64::new(*x, 0.0)).collect()
}

fn computational_basis() -> Vec<Vec<C64>> {
    (0..4)
        .map(|i| (0..4).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

fn mub_basis() -> Vec<Vec<C64>> {
    let one = C64::new(0.5, 0.0);
    let i = C64::new(0.0, 0.5);
    vec![
        vec![one, -i, -i, one],
        vec![one, -i, i, -one],
        vec![one, i, -i, -one],
        vec![one, i, i, one],
    ]
}

/// Outcome-ordered `p_a = <psi|M_a|psi>`, clamped to `[0, 1]`.
pub fn born_probabilities(state: &PureState, m: &Measurement) -> Result<Vec<f64>> {
    if state.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: state.dim(),
        });
    }
    m.effects()
        .iter()
        .map(|e| Ok(e.expectation(state.amplitudes())?.clamp(0.0, 1.0)))
        .collect()
}

fn check_probability(p: &[f64]) -> Result<()> {
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_TOL || p.iter().any(|x| *x < -PROBABILITY_TOL) {
        return Err(Error::NotProbability(sum));
    }
    Ok(())
}

/// Sorted `p ⊗ q`.
pub fn direct_product(p: &[f64], q: &[f64]) -> Result<WeightVector> {
    direct_product_all(&[p.to_vec(), q.to_vec()])
}

/// Sorted `⊗_x p_x` over any number of probability lists.
pub fn direct_product_all(ps: &[Vec<f64>]) -> Result<WeightVector> {
    if ps.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut acc = vec![1.0];
    for p in ps {
        check_probability(p)?;
        acc = acc.iter().flat_map(|a| p.iter().map(move |b| a * b)).collect();
    }
    WeightVector::new(acc)
}

/// Sorted `lambda p ⊕ (1 - lambda) q`.
pub fn direct_sum(p: &[f64], q: &[f64], lambda: f64) -> Result<WeightVector> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    direct_sum_weighted(&[p.to_vec(), q.to_vec()], &[lambda, 1.0 - lambda])
}

/// Sorted `⊕_x c_x p_x` for a probability vector of weights `c`.
pub fn direct_sum_weighted(ps: &[Vec<f64>], weights: &[f64]) -> Result<WeightVector> {
    check_weights(ps.len(), weights)?;
    let mut acc = Vec::with_capacity(ps.iter().map(Vec::len).sum());
    for (p, c) in ps.iter().zip(weights) {
        check_probability(p)?;
        acc.extend(p.iter().map(|x| c * x));
    }
    WeightVector::new(acc)
}

/// Unweighted concatenation `p ⊕ q ⊕ ...` (total equals the number of lists).
pub fn concatenation(ps: &[Vec<f64>]) -> Result<WeightVector> {
    WeightVector::new(ps.concat())
}

pub(crate) fn check_weights(expected: usize, weights: &[f64]) -> Result<()> {
    let sum: f64 = weights.iter().sum();
    if weights.len() != expected
        || (sum - 1.0).abs() > PROBABILITY_TOL
        || weights.iter().any(|w| !(0.0..=1.0).contains(w))
    {
        return Err(Error::WeightMismatch {
            expected,
            found: weights.len(),
            sum,
        });
    }
    Ok(())
}

//! Majorization order, Lorenz curves, and the lattice join / flatness process.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance for majorization comparisons and total checks.
pub const MAJORIZATION_TOL: f64 = 1e-9;
/// Negative round-off down to this magnitude is clamped to zero.
pub const CLAMP_TOL: f64 = 1e-12;

/// Non-negative weights sorted non-increasingly, with a cached positive total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    components: Vec<f64>,
    total: f64,
}

impl WeightVector {
    /// Clamps tiny negatives, sorts non-increasingly and caches the total.
    pub fn new(mut components: Vec<f64>) -> Result<Self> {
        for (index, x) in components.iter_mut().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite(index));
            }
            if *x < 0.0 {
                if *x < -CLAMP_TOL {
                    return Err(Error::NegativeComponent { index, value: *x });
                }
                *x = 0.0;
            }
        }
        components.sort_by(|a, b| b.total_cmp(a));
        let total: f64 = components.iter().sum();
        if total <= 0.0 {
            return Err(Error::NonPositiveTotal(total));
        }
        Ok(Self { components, total })
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `k`-th component with zero padding past the end.
    pub fn get(&self, k: usize) -> f64 {
        self.components.get(k).copied().unwrap_or(0.0)
    }

    /// Prefix sums `x_1, x_1 + x_2, ...`, zero-padded (i.e. held flat) to `len`.
    pub fn partial_sums(&self, len: usize) -> Vec<f64> {
        let mut acc = 0.0;
        (0..len.max(self.len()))
            .map(|k| {
                acc += self.get(k);
                acc
            })
            .collect()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.components.iter().map(|x| x * c).collect())
    }

    /// Copy with trailing zeros removed (at least one entry is kept).
    pub fn trimmed(&self) -> Vec<f64> {
        let end = self.components.iter().rposition(|x| *x > 0.0).map_or(1, |i| i + 1);
        self.components[..end].to_vec()
    }
}

/// Non-decreasing partial sums `Y_1, ..., Y_n` whose increments need not be sorted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulativeVector {
    partial_sums: Vec<f64>,
}

impl CumulativeVector {
    pub fn new(partial_sums: Vec<f64>) -> Result<Self> {
        if partial_sums.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(i) = partial_sums.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if partial_sums[0] < -CLAMP_TOL {
            return Err(Error::NotCumulative(0));
        }
        for k in 1..partial_sums.len() {
            if partial_sums[k] < partial_sums[k - 1] - CLAMP_TOL {
                return Err(Error::NotCumulative(k));
            }
        }
        Ok(Self { partial_sums })
    }

    pub fn from_increments(increments: &[f64]) -> Result<Self> {
        let mut acc = 0.0;
        Self::new(
            increments
                .iter()
                .map(|x| {
                    acc += x;
                    acc
                })
                .collect(),
        )
    }

    pub fn partial_sums(&self) -> &[f64] {
        &self.partial_sums
    }

    pub fn total(&self) -> f64 {
        *self.partial_sums.last().expect("non-empty")
    }

    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.partial_sums
            .iter()
            .map(|y| {
                let inc = y - prev;
                prev = *y;
                inc
            })
            .collect()
    }
}

/// Piecewise-linear interpolation of `(k, x_1 + ... + x_k)` starting at `(0, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzCurve {
    points: Vec<(usize, f64)>,
}

impl LorenzCurve {
    pub fn points(&self) -> &[(usize, f64)] {
        &self.points
    }

    /// Interpolated height at abscissa `x`; flat past the last point.
    pub fn height_at(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let last = self.points.len() - 1;
        if x >= last as f64 {
            return self.points[last].1;
        }
        let k = x.floor() as usize;
        let frac = x - k as f64;
        let (lo, hi) = (self.points[k].1, self.points[k + 1].1);
        lo + frac * (hi - lo)
    }

    /// Height at integer `k`, flat past the end.
    pub fn height(&self, k: usize) -> f64 {
        self.points
            .get(k)
            .map_or_else(|| self.points.last().expect("starts at origin").1, |p| p.1)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn check_totals(a: f64, b: f64) -> Result<()> {
    if (a - b).abs() > MAJORIZATION_TOL {
        return Err(Error::TotalMismatch { left: a, right: b });
    }
    Ok(())
}

/// `x ≺ y`: every prefix sum of `x` is at most the matching prefix sum of `y`.
pub fn is_majorized_by(x: &WeightVector, y: &WeightVector) -> Result<bool> {
    check_totals(x.total(), y.total())?;
    let n = x.len().max(y.len());
    let xs = x.partial_sums(n);
    let ys = y.partial_sums(n);
    Ok(xs.iter().zip(&ys).all(|(a, b)| *a <= b + MAJORIZATION_TOL))
}

pub fn lorenz_curve(x: &WeightVector) -> LorenzCurve {
    let mut points = Vec::with_capacity(x.len() + 1);
    points.push((0, 0.0));
    points.extend(x.partial_sums(x.len()).into_iter().enumerate().map(|(k, h)| (k + 1, h)));
    LorenzCurve { points }
}

/// Coordinatewise maximum of prefix sums over a finite set of vectors.
pub fn join(vectors: &[WeightVector]) -> Result<CumulativeVector> {
    let first = vectors.first().ok_or(Error::EmptySet)?;
    for v in &vectors[1..] {
        check_totals(first.total(), v.total())?;
    }
    let n = vectors.iter().map(WeightVector::len).max().unwrap_or(0);
    let mut best = vec![f64::NEG_INFINITY; n];
    for v in vectors {
        for (b, s) in best.iter_mut().zip(v.partial_sums(n)) {
            *b = b.max(s);
        }
    }
    CumulativeVector::new(best)
}

/// The flatness process: repeatedly replaces the first ascent `y_j > y_{j-1}`
/// together with the longest admissible run before it by its average, until
/// the sequence is non-increasing. `y_0` is treated as `+inf`.
pub fn flatten(increments: &[f64]) -> Result<WeightVector> {
    let mut y = Vec::with_capacity(increments.len());
    for (index, &v) in increments.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite(index));
        }
        if v < -CLAMP_TOL {
            return Err(Error::NegativeIncrement { index, value: v });
        }
        y.push(v.max(0.0));
    }
    let total: f64 = y.iter().sum();
    if total <= 0.0 {
        return Err(Error::NonPositiveTotal(total));
    }
    // Each pass leaves y[..=j] non-increasing, so the next ascent lies further right.
    let mut start = 1;
    while let Some(j) = (start..y.len()).find(|&j| y[j] > y[j - 1]) {
        let mut i = j;
        let mut block_sum = y[j];
        let average = loop {
            // Candidate block i-1..=j (0-based); admissible if the entry before it
            // (or +inf at the front) is at least the block average.
            i -= 1;
            block_sum += y[i];
            let a = block_sum / (j - i + 1) as f64;
            if i == 0 || y[i - 1] >= a {
                break a;
            }
        };
        for v in &mut y[i..=j] {
            *v = average;
        }
        start = j + 1;
    }
    WeightVector::new(y)
}

pub fn flatten_cumulative(y: &CumulativeVector) -> Result<WeightVector> {
    flatten(&y.increments())
}

/// `F(join(vectors))`: the least non-increasing upper bound of the set.
pub fn optimal_upper_bound(vectors: &[WeightVector]) -> Result<WeightVector> {
    flatten_cumulative(&join(vectors)?)
}

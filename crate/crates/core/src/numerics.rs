//! Dense complex Hermitian matrices and their spectra.
//!
//! The eigenvalue solver embeds a `d x d` Hermitian matrix `H = A + iB` into the
//! real symmetric `2d x 2d` matrix `[[A, -B], [B, A]]` and diagonalizes that with
//! cyclic Jacobi rotations. Every eigenvalue of `H` shows up twice in the
//! embedding, so the sorted doubled spectrum is read at every other position.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Complex amplitude / matrix entry.
pub type C64 = Complex64;

/// Tolerance for the Hermiticity check at construction.
pub const HERMITIAN_TOL: f64 = 1e-9;

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermitianOperator {
    dim: usize,
    /// Row-major `dim * dim` entries.
    entries: Vec<C64>,
}

impl HermitianOperator {
    /// Builds an operator from row-major entries, rejecting anything that is not
    /// Hermitian within [`HERMITIAN_TOL`]. Inputs are never symmetrized.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("operator dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if let Some(i) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        for row in 0..dim {
            if entries[row * dim + row].im.abs() > HERMITIAN_TOL {
                return Err(Error::NotHermitian { row, col: row });
            }
            for col in row + 1..dim {
                let a = entries[row * dim + col];
                let b = entries[col * dim + row];
                if (a - b.conj()).norm() > HERMITIAN_TOL {
                    return Err(Error::NotHermitian { row, col });
                }
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(dim, entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        op
    }

    /// Diagonal operator with real entries.
    pub fn diagonal(values: &[f64]) -> Self {
        let mut op = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            op.entries[i * values.len() + i] = C64::new(*v, 0.0);
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.entries.chunks(self.dim).map(<[C64]>::to_vec).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    /// Plain matrix product. The result is only Hermitian when the factors
    /// commute, so it is returned as raw row-major entries.
    pub fn matmul(&self, other: &Self) -> Result<Vec<C64>> {
        check_dim(self.dim, other.dim)?;
        let d = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        Ok(out)
    }

    /// `<v|H|v>` for an arbitrary (not necessarily normalized) vector.
    pub fn expectation(&self, v: &[C64]) -> Result<f64> {
        check_dim(self.dim, v.len())?;
        let d = self.dim;
        let mut acc = C64::new(0.0, 0.0);
        for (row, vi) in self.entries.chunks(d).zip(v) {
            let hv: C64 = row.iter().zip(v).map(|(h, x)| h * x).sum();
            acc += vi.conj() * hv;
        }
        Ok(acc.re)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn add_scaled_assign(&mut self, w: f64, other: &Self) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b * w;
        }
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Rank-1 projector `|v><v| / <v|v>`.
pub fn projector_from_vector(v: &[C64]) -> Result<HermitianOperator> {
    if let Some(i) = v.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::ZeroVector(norm));
    }
    let unit: Vec<C64> = v.iter().map(|z| z / norm).collect();
    let d = unit.len();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            entries.push(unit[i] * unit[j].conj());
        }
    }
    // Diagonal of an outer product is real up to rounding; pin it exactly.
    for i in 0..d {
        entries[i * d + i].im = 0.0;
    }
    Ok(HermitianOperator { dim: d, entries })
}

/// Entrywise `sum_i w_i * op_i`.
pub fn weighted_sum(terms: &[(f64, &HermitianOperator)]) -> Result<HermitianOperator> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::EmptySet);
    };
    let mut acc = HermitianOperator::zeros(first.dim);
    for (w, op) in terms {
        check_dim(acc.dim, op.dim)?;
        if !w.is_finite() {
            return Err(Error::NonFinite(0));
        }
        acc.add_scaled_assign(*w, op);
    }
    Ok(acc)
}

/// All eigenvalues in non-increasing order.
pub fn eigenvalues(op: &HermitianOperator) -> Result<Vec<f64>> {
    let d = op.dim;
    let n = 2 * d;
    let mut a = vec![0.0; n * n];
    for i in 0..d {
        for j in 0..d {
            let z = op.get(i, j);
            a[i * n + j] = z.re;
            a[(i + d) * n + (j + d)] = z.re;
            a[i * n + (j + d)] = -z.im;
            a[(i + d) * n + j] = z.im;
        }
    }
    let mut doubled = jacobi_symmetric(&mut a, n)?;
    doubled.sort_by(|x, y| y.total_cmp(x));
    Ok(doubled.into_iter().step_by(2).collect())
}

pub fn max_eigenvalue(op: &HermitianOperator) -> Result<f64> {
    Ok(eigenvalues(op)?[0])
}

pub fn min_eigenvalue(op: &HermitianOperator) -> Result<f64> {
    Ok(*eigenvalues(op)?.last().expect("dim > 0"))
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi on a dense symmetric matrix, destroying `a`. Returns the
/// diagonal after convergence.
fn jacobi_symmetric(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let tol = JACOBI_TOL * scale;
    let mut residual = off_diagonal_norm(a, n);
    let mut sweeps = 0;
    while residual >= tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NotConverged { sweeps, residual });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
        sweeps += 1;
        residual = off_diagonal_norm(a, n);
    }
    Ok((0..n).map(|i| a[i * n + i]).collect())
}

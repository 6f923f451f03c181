//! Dense symmetric eigensolver (cyclic Jacobi) and dense singular values.
//!
//! The coarse grids produced by aggregation are small by construction, so a
//! carefully tested Jacobi iteration is preferred here over a faster but
//! harder-to-verify tridiagonalization route. The same routines double as
//! the brute-force oracle for the property suites: singular values come
//! from the symmetric augmented operator [[0, M], [M^T, 0]], whose spectrum
//! is +/- the singular values of M.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

const MAX_SWEEPS: usize = 30;
const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Sorted spectrum: ascending eigenvalues or descending singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    kind: SpectrumKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Eigen,
    Singular,
}

impl Spectrum {
    pub(crate) fn new(values: Vec<f64>, kind: SpectrumKind) -> Self {
        debug_assert!(values.windows(2).all(|w| match kind {
            SpectrumKind::Eigen => w[0] <= w[1],
            SpectrumKind::Singular => w[0] >= w[1],
        }));
        Spectrum { values, kind }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Smallest value (ascending head for eigen, tail for singular).
    pub fn min(&self) -> Option<f64> {
        match self.kind {
            SpectrumKind::Eigen => self.values.first().copied(),
            SpectrumKind::Singular => self.values.last().copied(),
        }
    }

    pub fn max(&self) -> Option<f64> {
        match self.kind {
            SpectrumKind::Eigen => self.values.last().copied(),
            SpectrumKind::Singular => self.values.first().copied(),
        }
    }
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(m: &DenseMatrix) -> Result<Spectrum> {
    let (values, _) = jacobi(m, false)?;
    Ok(Spectrum::new(values, SpectrumKind::Eigen))
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvector columns.
pub fn sym_eigen_decomposition(m: &DenseMatrix) -> Result<(Spectrum, DenseMatrix)> {
    let (values, vectors) = jacobi(m, true)?;
    Ok((Spectrum::new(values, SpectrumKind::Eigen), vectors.unwrap()))
}

/// (smallest, largest) eigenvalue of a symmetric matrix.
pub fn eig_extremes(m: &DenseMatrix) -> Result<(f64, f64)> {
    let s = sym_eigenvalues(m)?;
    match (s.min(), s.max()) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::InvalidArgument("empty matrix has no extremes".into())),
    }
}

/// Singular values of an arbitrary m x n matrix, descending.
///
/// Computed as the nonnegative half of the spectrum of the symmetric
/// augmented operator; tiny negative roundoff is clamped to zero.
pub fn dense_singular_values(m: &DenseMatrix) -> Result<Spectrum> {
    let (rows, cols) = (m.nrows(), m.ncols());
    let k = rows.min(cols);
    if k == 0 {
        return Ok(Spectrum::new(Vec::new(), SpectrumKind::Singular));
    }
    let dim = rows + cols;
    let mut aug = DenseMatrix::zeros(dim, dim);
    for i in 0..rows {
        for j in 0..cols {
            let v = m[(i, j)];
            aug[(i, rows + j)] = v;
            aug[(rows + j, i)] = v;
        }
    }
    let eig = sym_eigenvalues(&aug)?;
    let mut top: Vec<f64> = eig.values()[dim - k..]
        .iter()
        .rev()
        .map(|&v| v.max(0.0))
        .collect();
    // guard the sort order against roundoff on near-zero pairs
    top.sort_by(|a, b| b.total_cmp(a));
    Ok(Spectrum::new(top, SpectrumKind::Singular))
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls
/// below OFF_DIAGONAL_TOL * ||M||_F, at most MAX_SWEEPS sweeps. The input
/// is symmetrized as (M + M^T)/2 first.
fn jacobi(m: &DenseMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<DenseMatrix>)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            nrows: m.nrows(),
            ncols: m.ncols(),
        });
    }
    let n = m.nrows();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    let norm_f = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_TOL * norm_f;
    let mut vectors = want_vectors.then(|| DenseMatrix::identity(n));

    let mut converged = n < 2 || off_diagonal_norm(&a, n) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
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
                if let Some(v) = vectors.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a, n) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence(format!(
            "jacobi sweep cap {MAX_SWEEPS} hit"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = vectors.map(|v| {
        let mut sorted = DenseMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            for k in 0..n {
                sorted[(k, dst)] = v[(k, src)];
            }
        }
        sorted
    });
    Ok((values, vectors))
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += a[i * n + j] * a[i * n + j];
        }
    }
    (2.0 * sum).sqrt()
}

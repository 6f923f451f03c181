//! Shift-invert refinement on the fine grid.
//!
//! Given a coarse-derived shift mu, factor (A - mu I) once and run inverse
//! iteration from a seeded random unit vector. Once the Rayleigh quotient
//! stabilizes, the factorization is rebuilt a single time at the current
//! quotient and a few more polish iterations run (two-stage Rayleigh
//! refinement). A shift that lands exactly on an eigenvalue makes the
//! factorization singular; the shift is then nudged to
//! mu * (1 + sqrt(ulp)) + sqrt(ulp) and factored once more.

use crate::error::{Error, Result};
use crate::lu::Factorization;
use crate::matrix::SparseMatrix;
use crate::rng::{random_unit_vector, rng_from_seed};

/// Outcome of one shift refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftResult {
    /// Converged eigenvalue (or singular value), the best iterate when
    /// `converged` is false.
    pub value: f64,
    /// The shift that was requested.
    pub shift: f64,
    /// ||A x - value x||_2 / ||A||_1 for the reported unit iterate.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Unit eigenvector iterate belonging to `value`.
    pub vector: Option<Vec<f64>>,
}

const SQRT_ULP: f64 = 1.4901161193847656e-8; // sqrt(f64::EPSILON)

fn perturb_shift(mu: f64) -> f64 {
    mu * (1.0 + SQRT_ULP) + SQRT_ULP
}

/// Factor (A - shift I); on a singular pivot retry once at the perturbed
/// shift. Returns the factorization and the shift actually used.
fn factor_near(a: &SparseMatrix, shift: f64, pivot_floor: f64) -> Result<(Factorization, f64)> {
    match Factorization::shifted(a, shift, pivot_floor) {
        Ok(f) => Ok((f, shift)),
        Err(_) => {
            let nudged = perturb_shift(shift);
            Factorization::shifted(a, nudged, pivot_floor)
                .map(|f| (f, nudged))
                .map_err(|_| {
                    Error::NoConvergence(format!(
                        "shifted operator singular at {shift} and at perturbed {nudged}"
                    ))
                })
        }
    }
}

/// Converge to the eigenvalue of symmetric A nearest the shift `mu`.
///
/// Iteration nonconvergence is not an error: the result carries the best
/// iterate with `converged == false`. Errors are reserved for structural
/// problems (shape, symmetry, unusable factorization).
pub fn eigen_near_shift(
    a: &SparseMatrix,
    mu: f64,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<ShiftResult> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            nrows: a.nrows(),
            ncols: a.ncols(),
        });
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = a.nrows();
    let norm1 = a.norm_one();
    let scale = if norm1 > 0.0 { norm1 } else { 1.0 };
    let pivot_floor = (1e-14 * norm1).max(f64::MIN_POSITIVE);

    let (mut factor, _) = factor_near(a, mu, pivot_floor)?;

    let mut rng = rng_from_seed(seed);
    let mut x = random_unit_vector(&mut rng, n);
    let mut rho = {
        let ax = a.matvec(&x)?;
        dot(&x, &ax)
    };

    let mut best_value = rho;
    let mut best_residual = f64::INFINITY;
    let mut best_vector = x.clone();
    let mut converged = false;
    let mut reshifted = false;
    let mut iterations = 0;
    let mut prev_residual = f64::INFINITY;
    // give the first stage at most half the budget before re-shifting
    let stage_cap = (max_iters / 2).max(1);

    while iterations < max_iters {
        iterations += 1;
        let y = factor.solve(&x);
        let ny = norm2(&y);
        if !ny.is_finite() || ny == 0.0 {
            break;
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / ny;
        }
        let ax = a.matvec(&x)?;
        let rho_new = dot(&x, &ax);
        let residual = {
            let mut s = 0.0;
            for (axi, xi) in ax.iter().zip(&x) {
                let r = axi - rho_new * xi;
                s += r * r;
            }
            s.sqrt() / scale
        };
        if residual < best_residual {
            best_residual = residual;
            best_value = rho_new;
            best_vector.copy_from_slice(&x);
        }
        if residual <= tol {
            converged = true;
            break;
        }
        if !reshifted {
            // stage one: iterate at the proposed shift until the Rayleigh
            // quotient settles, then rebuild the factorization there once
            let stalled =
                (rho_new - rho).abs() <= tol * scale || iterations >= stage_cap;
            if stalled {
                reshifted = true;
                match factor_near(a, rho_new, pivot_floor) {
                    Ok((f, _)) => factor = f,
                    Err(_) => break,
                }
                rho = rho_new;
                // fresh progress baseline for the polish stage
                prev_residual = f64::INFINITY;
                continue;
            }
        } else if residual > 0.9 * prev_residual {
            // polish stage stopped making progress
            break;
        }
        prev_residual = residual;
        rho = rho_new;
    }

    Ok(ShiftResult {
        value: best_value,
        shift: mu,
        residual: best_residual,
        iterations,
        converged,
        vector: Some(best_vector),
    })
}

/// Converge to the singular value of A (any shape) nearest `sigma_shift`,
/// via the symmetric augmented operator [[0, A], [A^T, 0]] whose nonzero
/// spectrum is +/- the singular values.
///
/// A rectangular A adds |m - n| structural zero eigenvalues (the left or
/// right null space) that are not singular values. An eigenpair for a
/// genuine sigma splits its unit vector evenly between the row and column
/// blocks; a null-space artifact puts everything in one block, and such a
/// convergence is reported as `converged == false`.
pub fn singular_value_near_shift(
    a: &SparseMatrix,
    sigma_shift: f64,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<ShiftResult> {
    if sigma_shift < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "singular value shift must be nonnegative, got {sigma_shift}"
        )));
    }
    let (m, n) = (a.nrows(), a.ncols());
    let aug = augmented_operator(a);
    let mut inner = eigen_near_shift(&aug, sigma_shift, tol, max_iters, seed)?;
    if m != n && inner.converged {
        if let Some(vec) = &inner.vector {
            let (u, v) = vec.split_at(m);
            let starved = if m > n { norm2(v) } else { norm2(u) };
            if starved <= 1e-6 {
                inner.converged = false;
            }
        }
    }
    Ok(ShiftResult {
        value: inner.value.abs(),
        shift: sigma_shift,
        ..inner
    })
}

/// The symmetric operator [[0, A], [A^T, 0]] of order m + n.
pub fn augmented_operator(a: &SparseMatrix) -> SparseMatrix {
    let m = a.nrows();
    let n = a.ncols();
    let mut triplets = Vec::with_capacity(2 * a.nnz());
    for (i, j, v) in a.iter() {
        triplets.push((i, m + j, v));
        triplets.push((m + j, i, v));
    }
    let aug = SparseMatrix::from_triplets(m + n, m + n, &triplets).expect("indices in range");
    debug_assert!(aug.is_symmetric() || aug.nnz() == 0);
    aug
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

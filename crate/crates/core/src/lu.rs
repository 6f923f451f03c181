//! Direct factorizations of the shifted operator (A - mu I): compact
//! banded LU with partial pivoting for narrow-band matrices, dense LU
//! otherwise. Pivoting within a band of m1 subdiagonals widens the upper
//! band to at most m1 + m2, which the compact storage accounts for.

use crate::matrix::SparseMatrix;

/// Factorization failed: a pivot fell below the caller's floor, so the
/// shifted matrix is numerically singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Singular;

pub(crate) enum Factorization {
    Banded(BandedLu),
    Dense(DenseLu),
}

impl Factorization {
    /// Factor A - shift*I, choosing banded storage when the band is narrow
    /// enough to pay off.
    pub(crate) fn shifted(
        a: &SparseMatrix,
        shift: f64,
        pivot_floor: f64,
    ) -> Result<Self, Singular> {
        assert!(a.is_square(), "factorization requires a square matrix");
        let n = a.nrows();
        let band = a.bandwidth();
        if band <= n / 4 {
            BandedLu::factor(a, shift, pivot_floor).map(Factorization::Banded)
        } else {
            DenseLu::factor(a, shift, pivot_floor).map(Factorization::Dense)
        }
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        match self {
            Factorization::Banded(f) => f.solve(b),
            Factorization::Dense(f) => f.solve(b),
        }
    }
}

/// Compact banded LU with partial pivoting.
///
/// `upper` row i holds the left-justified U row: upper[i][k] = U[i, i+k]
/// for k in 0..(m1+m2+1). `lower` row k holds the elimination multipliers
/// for the up-to-m1 rows below row k. `pivot` records the row interchanged
/// into position k.
pub(crate) struct BandedLu {
    n: usize,
    m1: usize,
    width: usize,
    upper: Vec<f64>,
    lower: Vec<f64>,
    pivot: Vec<usize>,
}

impl BandedLu {
    pub(crate) fn factor(
        a: &SparseMatrix,
        shift: f64,
        pivot_floor: f64,
    ) -> Result<Self, Singular> {
        let n = a.nrows();
        let m1 = a.bandwidth();
        let m2 = m1;
        let width = m1 + m2 + 1;

        // band storage: row i column (j - i + m1) holds A[i, j]
        let mut upper = vec![0.0; n * width];
        for (i, j, v) in a.iter() {
            upper[i * width + (j + m1 - i)] = v;
        }
        for i in 0..n {
            upper[i * width + m1] -= shift;
        }

        // left-justify the top m1 rows so column 0 is each row's leading entry
        let mut l = m1;
        for i in 0..m1.min(n) {
            for j in (m1 - i)..width {
                upper[i * width + (j - l)] = upper[i * width + j];
            }
            l -= 1;
            for j in (width - l - 1)..width {
                upper[i * width + j] = 0.0;
            }
        }

        let mut lower = vec![0.0; n * m1.max(1)];
        let mut pivot = vec![0usize; n];
        let mut reach = m1;
        for k in 0..n {
            if reach < n {
                reach += 1;
            }
            let mut best = k;
            let mut best_mag = upper[k * width].abs();
            for j in (k + 1)..reach {
                let mag = upper[j * width].abs();
                if mag > best_mag {
                    best_mag = mag;
                    best = j;
                }
            }
            pivot[k] = best;
            if best_mag < pivot_floor || best_mag == 0.0 {
                return Err(Singular);
            }
            if best != k {
                for j in 0..width {
                    upper.swap(k * width + j, best * width + j);
                }
            }
            for i in (k + 1)..reach {
                let mult = upper[i * width] / upper[k * width];
                lower[k * m1.max(1) + (i - k - 1)] = mult;
                for j in 1..width {
                    upper[i * width + (j - 1)] =
                        upper[i * width + j] - mult * upper[k * width + j];
                }
                upper[i * width + width - 1] = 0.0;
            }
        }
        Ok(BandedLu {
            n,
            m1,
            width,
            upper,
            lower,
            pivot,
        })
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, m1, width) = (self.n, self.m1, self.width);
        let mut x = b.to_vec();
        let mut reach = m1;
        for k in 0..n {
            let p = self.pivot[k];
            if p != k {
                x.swap(k, p);
            }
            if reach < n {
                reach += 1;
            }
            for j in (k + 1)..reach {
                x[j] -= self.lower[k * m1.max(1) + (j - k - 1)] * x[k];
            }
        }
        let mut l = 1;
        for i in (0..n).rev() {
            let mut acc = x[i];
            for k in 1..l {
                acc -= self.upper[i * width + k] * x[i + k];
            }
            x[i] = acc / self.upper[i * width];
            if l < width {
                l += 1;
            }
        }
        x
    }
}

/// Dense LU with partial pivoting, for wide-band or dense-pattern matrices.
pub(crate) struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    pivot: Vec<usize>,
}

impl DenseLu {
    pub(crate) fn factor(
        a: &SparseMatrix,
        shift: f64,
        pivot_floor: f64,
    ) -> Result<Self, Singular> {
        let n = a.nrows();
        let mut lu = vec![0.0; n * n];
        for (i, j, v) in a.iter() {
            lu[i * n + j] = v;
        }
        for i in 0..n {
            lu[i * n + i] -= shift;
        }
        let mut pivot = vec![0usize; n];
        for k in 0..n {
            let mut best = k;
            let mut best_mag = lu[k * n + k].abs();
            for i in (k + 1)..n {
                let mag = lu[i * n + k].abs();
                if mag > best_mag {
                    best_mag = mag;
                    best = i;
                }
            }
            pivot[k] = best;
            if best_mag < pivot_floor || best_mag == 0.0 {
                return Err(Singular);
            }
            if best != k {
                for j in 0..n {
                    lu.swap(k * n + j, best * n + j);
                }
            }
            let diag = lu[k * n + k];
            for i in (k + 1)..n {
                let mult = lu[i * n + k] / diag;
                lu[i * n + k] = mult;
                for j in (k + 1)..n {
                    lu[i * n + j] -= mult * lu[k * n + j];
                }
            }
        }
        Ok(DenseLu { n, lu, pivot })
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = b.to_vec();
        // multipliers were swapped along with their rows during
        // factorization, so apply the whole permutation up front and then
        // run clean triangular solves
        for k in 0..n {
            let p = self.pivot[k];
            if p != k {
                x.swap(k, p);
            }
        }
        for k in 0..n {
            for i in (k + 1)..n {
                x[i] -= self.lu[i * n + k] * x[k];
            }
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for (l, xj) in self.lu[i * n + i + 1..i * n + n].iter().zip(&x[i + 1..]) {
                acc -= l * xj;
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }
}

//! Sparse (CSR) and dense matrix types.
//!
//! [`SparseMatrix`] is the fine-grid operator: compressed-row storage,
//! immutable after construction, safe to share across worker threads.
//! [`DenseMatrix`] holds the small coarse-grid operators and serves the
//! dense eigensolver.

use crate::error::{Error, Result};

/// Compressed-row sparse matrix over `f64`.
///
/// Structural invariants (checked by [`SparseMatrix::validate`]):
/// `row_ptr` is nondecreasing with `row_ptr[0] == 0` and
/// `row_ptr[nrows] == nnz`; column indices are strictly increasing within
/// each row and all below `ncols`. The `symmetric` flag is only ever set
/// after verifying that every stored `(i, j, v)` has an exactly equal
/// mirror entry `(j, i, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    symmetric: bool,
}

impl SparseMatrix {
    /// Build from (row, col, value) triplets. Duplicate positions are summed,
    /// rows are sorted, and the symmetry flag is established by verification.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        entries: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, _) in entries {
            if r >= nrows || c >= ncols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    nrows,
                    ncols,
                });
            }
        }
        let mut per_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nrows];
        for &(r, c, v) in entries {
            per_row[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        row_ptr.push(0);
        for row in &mut per_row {
            row.sort_by_key(|&(c, _)| c);
            let mut i = 0;
            while i < row.len() {
                let c = row[i].0;
                let mut v = row[i].1;
                i += 1;
                while i < row.len() && row[i].0 == c {
                    v += row[i].1;
                    i += 1;
                }
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        let mut m = SparseMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
            symmetric: false,
        };
        m.symmetric = m.check_symmetric();
        Ok(m)
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
            symmetric: true,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// Stored entry at (i, j), if any.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).ok().map(|k| vals[k])
    }

    /// Iterate over stored entries as (row, col, value).
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&c, &v)| (i, c, v))
        })
    }

    fn check_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        self.iter().all(|(i, j, v)| self.get(j, i) == Some(v))
    }

    /// Check the CSR structural invariants.
    pub fn validate(&self) -> Result<()> {
        if self.row_ptr.len() != self.nrows + 1 || self.row_ptr[0] != 0 {
            return Err(Error::InvalidArgument("malformed row_ptr".into()));
        }
        if *self.row_ptr.last().unwrap() != self.values.len()
            || self.col_idx.len() != self.values.len()
        {
            return Err(Error::InvalidArgument("row_ptr/nnz mismatch".into()));
        }
        for i in 0..self.nrows {
            if self.row_ptr[i] > self.row_ptr[i + 1] {
                return Err(Error::InvalidArgument("row_ptr not nondecreasing".into()));
            }
            let (cols, _) = self.row(i);
            for w in cols.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::InvalidArgument(
                        "columns not strictly increasing".into(),
                    ));
                }
            }
            if let Some(&c) = cols.last() {
                if c >= self.ncols {
                    return Err(Error::InvalidArgument("column index out of range".into()));
                }
            }
        }
        Ok(())
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "matvec: vector length {} vs {} columns",
                x.len(),
                self.ncols
            )));
        }
        let y = (0..self.nrows)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum()
            })
            .collect();
        Ok(y)
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                nrows: self.nrows,
                ncols: self.ncols,
            });
        }
        Ok((0..self.nrows).map(|i| self.get(i, i).unwrap_or(0.0)).sum())
    }

    /// One Gershgorin disc per row: center a_ii (0 if the diagonal entry is
    /// absent), radius the absolute off-diagonal row sum.
    pub fn gershgorin_discs(&self) -> Result<Vec<GershgorinDisc>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                nrows: self.nrows,
                ncols: self.ncols,
            });
        }
        let mut discs = Vec::with_capacity(self.nrows);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            let mut center = 0.0;
            let mut radius = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                if j == i {
                    center = v;
                } else {
                    radius += v.abs();
                }
            }
            discs.push(GershgorinDisc { center, radius });
        }
        Ok(discs)
    }

    /// Max absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut col_sums = vec![0.0; self.ncols];
        for (_, j, v) in self.iter() {
            col_sums[j] += v.abs();
        }
        col_sums.into_iter().fold(0.0, f64::max)
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows)
            .map(|i| self.row(i).1.iter().map(|v| v.abs()).sum())
            .fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Max |i - j| over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.iter()
            .map(|(i, j, _)| i.abs_diff(j))
            .max()
            .unwrap_or(0)
    }

    /// A + c I (the diagonal is created where structurally absent).
    pub fn shift_diagonal(&self, c: f64) -> SparseMatrix {
        let mut triplets: Vec<(usize, usize, f64)> = self.iter().collect();
        if self.is_square() {
            for i in 0..self.nrows {
                triplets.push((i, i, c));
            }
        }
        SparseMatrix::from_triplets(self.nrows, self.ncols, &triplets)
            .expect("indices already in range")
    }

    pub fn transpose(&self) -> SparseMatrix {
        let triplets: Vec<(usize, usize, f64)> = self.iter().map(|(i, j, v)| (j, i, v)).collect();
        SparseMatrix::from_triplets(self.ncols, self.nrows, &triplets)
            .expect("indices already in range")
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.iter() {
            d[(i, j)] = v;
        }
        d
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix {
            nrows,
            ncols,
            data: vec![0.0; nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend_from_slice(r);
        }
        DenseMatrix { nrows, ncols, data }
    }

    pub fn from_vec(nrows: usize, ncols: usize, data: Vec<f64>) -> Self {
        assert_eq!(nrows * ncols, data.len(), "shape/data length mismatch");
        DenseMatrix { nrows, ncols, data }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.ncols, rhs.nrows, "matmul shape mismatch");
        let mut out = DenseMatrix::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.ncols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols, "matvec shape mismatch");
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest |entry| deviation from symmetry, 0 for a symmetric matrix.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.nrows {
            for j in (i + 1)..self.ncols.min(self.nrows) {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Store every nonzero entry in CSR form.
    pub fn to_sparse(&self) -> SparseMatrix {
        let mut triplets = Vec::new();
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                let v = self[(i, j)];
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        SparseMatrix::from_triplets(self.nrows, self.ncols, &triplets)
            .expect("indices already in range")
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.data[i * self.ncols + j]
    }
}

/// Complex-plane disc |z - center| <= radius from the Gershgorin theorem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GershgorinDisc {
    pub center: f64,
    pub radius: f64,
}

impl GershgorinDisc {
    /// Real-axis membership test.
    pub fn contains(&self, x: f64) -> bool {
        (x - self.center).abs() <= self.radius
    }
}

/// Convenience: tridiagonal Toeplitz (off, diag, off) of order n.
pub fn tridiagonal(n: usize, off: f64, diag: f64) -> SparseMatrix {
    let mut triplets = Vec::with_capacity(3 * n);
    for i in 0..n {
        if i > 0 {
            triplets.push((i, i - 1, off));
        }
        triplets.push((i, i, diag));
        if i + 1 < n {
            triplets.push((i, i + 1, off));
        }
    }
    SparseMatrix::from_triplets(n, n, &triplets).expect("indices in range")
}

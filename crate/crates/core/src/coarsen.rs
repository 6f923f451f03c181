//! Piecewise-constant interpolation operators and coarse-grid assembly.
//!
//! An aggregation partition induces an interpolation operator P with
//! exactly one nonzero per row: P_ij != 0 iff node i belongs to aggregate
//! G_j. In paper-literal mode that nonzero is 1, which makes P^T P =
//! diag(|G_j|). The estimation pipelines instead use the normalized mode,
//! scaling column j by 1/sqrt(|G_j|) so that P^T P = I and the Poincare
//! separation hypotheses hold.
//!
//! Coarse operators P^T A P (and U^T A V for the two-sided singular value
//! variant) are accumulated in a single pass over the CSR nonzeros: entry
//! a_kl lands in coarse position (part(k), part(l)) scaled by both column
//! scales.

use crate::aggregation::Partition;
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, SparseMatrix};

/// Aggregation-based interpolation operator, stored as the partition plus
/// one scale per coarse column.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationOperator {
    partition: Partition,
    column_scale: Vec<f64>,
    normalized: bool,
}

impl InterpolationOperator {
    pub fn nrows(&self) -> usize {
        self.partition.len()
    }

    pub fn ncols(&self) -> usize {
        self.partition.n_aggregates()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn column_scale(&self) -> &[f64] {
        &self.column_scale
    }

    /// The nonzero value in row i (column part(i)).
    pub fn row_value(&self, i: usize) -> f64 {
        self.column_scale[self.partition.part()[i]]
    }

    /// Explicit dense P, for oracles and small-scale checks.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut p = DenseMatrix::zeros(self.nrows(), self.ncols());
        for (i, &agg) in self.partition.part().iter().enumerate() {
            p[(i, agg)] = self.column_scale[agg];
        }
        p
    }

    /// Coarse-to-fine application: y = P x.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols());
        self.partition
            .part()
            .iter()
            .map(|&agg| self.column_scale[agg] * x[agg])
            .collect()
    }

    /// Fine-to-coarse restriction: y = P^T x.
    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows());
        let mut y = vec![0.0; self.ncols()];
        for (i, &agg) in self.partition.part().iter().enumerate() {
            y[agg] += self.column_scale[agg] * x[i];
        }
        y
    }
}

/// Build P from a partition. Paper-literal mode keeps unit entries;
/// normalized mode scales column j by 1/sqrt(|G_j|), making the columns
/// orthonormal.
pub fn build_interpolation(partition: &Partition, normalized: bool) -> InterpolationOperator {
    let sizes = partition.aggregate_sizes();
    let column_scale = sizes
        .iter()
        .map(|&s| {
            debug_assert!(s > 0, "partition invariant: no empty aggregate");
            if normalized {
                1.0 / (s as f64).sqrt()
            } else {
                1.0
            }
        })
        .collect();
    InterpolationOperator {
        partition: partition.clone(),
        column_scale,
        normalized,
    }
}

/// Coarse operator A_c = P^T A P as a dense matrix.
pub fn galerkin_product(a: &SparseMatrix, p: &InterpolationOperator) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            nrows: a.nrows(),
            ncols: a.ncols(),
        });
    }
    if p.nrows() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "interpolation has {} rows, matrix is {}x{}",
            p.nrows(),
            a.nrows(),
            a.ncols()
        )));
    }
    let part = p.partition().part();
    let scale = p.column_scale();
    let nc = p.ncols();
    let mut coarse = DenseMatrix::zeros(nc, nc);
    for (k, l, v) in a.iter() {
        let (i, j) = (part[k], part[l]);
        coarse[(i, j)] += scale[i] * scale[j] * v;
    }
    Ok(coarse)
}

/// Two-sided coarse operator B = U^T A V for rectangular A. Both operators
/// must be normalized; the singular value separation theorem assumes
/// orthonormal columns on both sides.
pub fn two_sided_product(
    a: &SparseMatrix,
    u: &InterpolationOperator,
    v: &InterpolationOperator,
) -> Result<DenseMatrix> {
    if !u.is_normalized() || !v.is_normalized() {
        return Err(Error::RequiresNormalized);
    }
    if u.nrows() != a.nrows() || v.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, U has {} rows, V has {} rows",
            a.nrows(),
            a.ncols(),
            u.nrows(),
            v.nrows()
        )));
    }
    let part_u = u.partition().part();
    let part_v = v.partition().part();
    let (su, sv) = (u.column_scale(), v.column_scale());
    let mut b = DenseMatrix::zeros(u.ncols(), v.ncols());
    for (k, l, value) in a.iter() {
        let (i, j) = (part_u[k], part_v[l]);
        b[(i, j)] += su[i] * sv[j] * value;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregation::{random_partition, Partition};
    use crate::generators::gen_random_sparse;
    use crate::matrix::tridiagonal;

    /// Dense triple-product oracle, independent of the CSR accumulation path.
    fn dense_galerkin(a: &SparseMatrix, p: &InterpolationOperator) -> DenseMatrix {
        let pd = p.to_dense();
        pd.transpose().matmul(&a.to_dense()).matmul(&pd)
    }

    #[test]
    fn literal_interpolation_matches_alternating_pattern() {
        let part = Partition::new(vec![0, 1, 0, 1], 2).unwrap();
        let p = build_interpolation(&part, false);
        let pt = p.to_dense().transpose();
        let expect = DenseMatrix::from_rows(&[&[1.0, 0.0, 1.0, 0.0], &[0.0, 1.0, 0.0, 1.0]]);
        assert_eq!(pt, expect);
    }

    #[test]
    fn normalized_columns_are_orthonormal() {
        let part = Partition::new(vec![0, 1, 0, 1], 2).unwrap();
        let p = build_interpolation(&part, true);
        let pd = p.to_dense();
        let ptp = pd.transpose().matmul(&pd);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ptp[(i, j)] - expect).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn singleton_partition_gives_identity() {
        let part = Partition::new(vec![0, 1, 2], 3).unwrap();
        let p = build_interpolation(&part, true);
        assert_eq!(p.to_dense(), DenseMatrix::identity(3));
    }

    #[test]
    fn galerkin_tridiagonal_literal() {
        let a = tridiagonal(4, -1.0, 2.0);
        let part = Partition::new(vec![0, 0, 1, 1], 2).unwrap();
        let p = build_interpolation(&part, false);
        let ac = galerkin_product(&a, &p).unwrap();
        let expect = DenseMatrix::from_rows(&[&[2.0, -1.0], &[-1.0, 2.0]]);
        assert_eq!(ac, expect);
    }

    #[test]
    fn galerkin_tridiagonal_normalized() {
        let a = tridiagonal(4, -1.0, 2.0);
        let part = Partition::new(vec![0, 0, 1, 1], 2).unwrap();
        let p = build_interpolation(&part, true);
        let ac = galerkin_product(&a, &p).unwrap();
        assert!((ac[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((ac[(0, 1)] + 0.5).abs() < 1e-15);
        let s = crate::dense_eig::sym_eigenvalues(&ac).unwrap();
        assert!((s.values()[0] - 0.5).abs() < 1e-14);
        assert!((s.values()[1] - 1.5).abs() < 1e-14);
    }

    #[test]
    fn galerkin_identity_normalized_is_coarse_identity() {
        let a = SparseMatrix::identity(10);
        let part = random_partition(10, 4, 3).unwrap();
        let p = build_interpolation(&part, true);
        let ac = galerkin_product(&a, &p).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ac[(i, j)] - expect).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn galerkin_matches_dense_oracle() {
        for (n, k, seed) in [(30usize, 7usize, 17u64), (100, 11, 18), (64, 23, 19)] {
            let a = crate::generators::gen_random_symmetric(n, seed);
            let part = random_partition(n, k, seed + 4).unwrap();
            for normalized in [false, true] {
                let p = build_interpolation(&part, normalized);
                let fast = galerkin_product(&a, &p).unwrap();
                let oracle = dense_galerkin(&a, &p);
                let tol = 1e-12 * a.norm_frobenius();
                for i in 0..k {
                    for j in 0..k {
                        assert!((fast[(i, j)] - oracle[(i, j)]).abs() <= tol, "n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn galerkin_preserves_symmetry() {
        let a = crate::generators::gen_random_symmetric(40, 2);
        let part = random_partition(40, 9, 4).unwrap();
        let ac = galerkin_product(&a, &build_interpolation(&part, true)).unwrap();
        assert!(ac.asymmetry() <= 1e-14 * ac.norm_frobenius());
    }

    #[test]
    fn galerkin_dimension_mismatch() {
        let a = tridiagonal(4, -1.0, 2.0);
        let part = Partition::new(vec![0, 1, 0], 2).unwrap();
        let p = build_interpolation(&part, true);
        assert!(matches!(
            galerkin_product(&a, &p),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn two_sided_identity_operators_densify() {
        let a = gen_random_sparse(3, 3, 5);
        let id = Partition::new(vec![0, 1, 2], 3).unwrap();
        let u = build_interpolation(&id, true);
        let b = two_sided_product(&a, &u, &u).unwrap();
        assert_eq!(b, a.to_dense());
    }

    #[test]
    fn two_sided_on_identity_matrix() {
        let a = SparseMatrix::identity(4);
        let part = Partition::new(vec![0, 0, 1, 1], 2).unwrap();
        let u = build_interpolation(&part, true);
        let b = two_sided_product(&a, &u, &u).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((b[(i, j)] - expect).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn two_sided_matches_dense_oracle() {
        let a = gen_random_sparse(6, 4, 11);
        let u = build_interpolation(&random_partition(6, 3, 1).unwrap(), true);
        let v = build_interpolation(&random_partition(4, 2, 2).unwrap(), true);
        let b = two_sided_product(&a, &u, &v).unwrap();
        let oracle = u
            .to_dense()
            .transpose()
            .matmul(&a.to_dense())
            .matmul(&v.to_dense());
        for i in 0..3 {
            for j in 0..2 {
                assert!((b[(i, j)] - oracle[(i, j)]).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn two_sided_requires_normalized() {
        let a = gen_random_sparse(4, 4, 3);
        let part = Partition::new(vec![0, 0, 1, 1], 2).unwrap();
        let literal = build_interpolation(&part, false);
        let normalized = build_interpolation(&part, true);
        assert!(matches!(
            two_sided_product(&a, &literal, &normalized),
            Err(Error::RequiresNormalized)
        ));
    }

    #[test]
    fn apply_and_transpose_match_dense() {
        let part = random_partition(8, 3, 9).unwrap();
        let p = build_interpolation(&part, true);
        let pd = p.to_dense();
        let xc = [1.0, -2.0, 0.5];
        assert_eq!(p.apply(&xc), pd.matvec(&xc));
        let xf: Vec<f64> = (0..8).map(|i| i as f64 - 3.0).collect();
        let restricted = p.apply_transpose(&xf);
        let oracle = pd.transpose().matvec(&xf);
        for (a, b) in restricted.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}

//! Shared brute-force oracles for the integration suites. Everything here
//! is deliberately independent of the library's fast paths: dense
//! triple-loop products, a plain Cholesky, closed-form spectra, and a
//! literal re-execution of the aggregation rule.

#![allow(dead_code)]

use specoarse::matrix::{DenseMatrix, SparseMatrix};
use specoarse::rng::{rng_from_seed, uniform_f64};
use std::f64::consts::PI;

/// Dense triple-loop matvec, the oracle for the CSR kernel.
pub fn dense_matvec_oracle(a: &DenseMatrix, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; a.nrows()];
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            y[i] += a[(i, j)] * x[j];
        }
    }
    y
}

/// Closed-form eigenvalues of tridiag(off, diag, off) of order n,
/// ascending: diag + 2*off*cos(k*pi/(n+1)) ordered by value.
pub fn toeplitz_eigenvalues(n: usize, off: f64, diag: f64) -> Vec<f64> {
    let mut values: Vec<f64> = (1..=n)
        .map(|k| diag + 2.0 * off * (k as f64 * PI / (n as f64 + 1.0)).cos())
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Plain dense Cholesky; returns false when a pivot is not positive,
/// i.e. the matrix is not positive definite.
pub fn cholesky_is_positive_definite(a: &DenseMatrix) -> bool {
    assert!(a.is_square());
    let n = a.nrows();
    let mut l = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[(i, j)];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return false;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    true
}

/// True when `value` is within `tol` of some entry of `spectrum`.
pub fn member_within(value: f64, spectrum: &[f64], tol: f64) -> bool {
    spectrum.iter().any(|&s| (value - s).abs() <= tol)
}

/// Literal re-execution of the strong-coupling rule, written from the
/// definition with no shared code. Also reports whether any pick was
/// decided by the index tie-break in a way that matters: a tie is benign
/// when every tied candidate would form the same aggregate set (mutual
/// pairs, leftover singletons), structural otherwise.
pub fn strong_coupling_oracle(a: &SparseMatrix, beta: f64) -> (Vec<usize>, bool) {
    let n = a.nrows();
    let dense = a.to_dense();
    let mut strong: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let mut max_mag = 0.0f64;
        for k in 0..n {
            if k != i {
                max_mag = max_mag.max(dense[(i, k)].abs());
            }
        }
        strong.push(
            (0..n)
                .filter(|&j| j != i && dense[(i, j)] < -beta * max_mag)
                .collect(),
        );
    }
    let prospective = |cand: usize, marked: &[bool]| -> Vec<usize> {
        let mut agg: Vec<usize> = strong[cand].iter().copied().filter(|&j| !marked[j]).collect();
        agg.push(cand);
        agg.sort_unstable();
        agg
    };
    let mut part = vec![usize::MAX; n];
    let mut marked = vec![false; n];
    let mut next_id = 0usize;
    let mut had_structural_tie = false;
    while marked.iter().any(|&m| !m) {
        let mut best = usize::MAX;
        let mut best_m = usize::MAX;
        let mut tied: Vec<usize> = Vec::new();
        for i in 0..n {
            if marked[i] {
                continue;
            }
            let m_i = strong[i].iter().filter(|&&j| !marked[j]).count();
            if m_i < best_m {
                best = i;
                best_m = m_i;
                tied.clear();
                tied.push(i);
            } else if m_i == best_m {
                tied.push(i);
            }
        }
        if tied.len() > 1 && best_m > 0 {
            let first = prospective(tied[0], &marked);
            if tied[1..].iter().any(|&c| prospective(c, &marked) != first) {
                had_structural_tie = true;
            }
        }
        let id = next_id;
        next_id += 1;
        part[best] = id;
        marked[best] = true;
        for &j in &strong[best] {
            if !marked[j] {
                part[j] = id;
                marked[j] = true;
            }
        }
    }
    (part, had_structural_tie)
}

// helper stubs removed below; see strong_coupling_oracle

/// Enumerate every balanced partition of `n` nodes into `k` aggregates of
/// size n/k, one part array per partition. Aggregate labels are
/// canonicalized by anchoring each new aggregate at the lowest unassigned
/// node, so no two results differ only by relabeling.
pub fn balanced_partitions(n: usize, k: usize) -> Vec<Vec<usize>> {
    assert_eq!(n % k, 0);
    let size = n / k;
    let mut out = Vec::new();
    let mut part = vec![usize::MAX; n];
    fill_balanced(&mut part, n, k, size, 0, &mut out);
    out
}

fn fill_balanced(
    part: &mut Vec<usize>,
    n: usize,
    k: usize,
    size: usize,
    next_agg: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(first_free) = part.iter().position(|&p| p == usize::MAX) else {
        out.push(part.clone());
        return;
    };
    if next_agg == k {
        return;
    }
    // the lowest unassigned node anchors the next aggregate, which kills
    // permutations of aggregate labels
    part[first_free] = next_agg;
    let free: Vec<usize> = (first_free + 1..n).filter(|&i| part[i] == usize::MAX).collect();
    for combo in combinations(&free, size - 1) {
        for &i in &combo {
            part[i] = next_agg;
        }
        fill_balanced(part, n, k, size, next_agg + 1, out);
        for &i in &combo {
            part[i] = usize::MAX;
        }
    }
    part[first_free] = usize::MAX;
}

fn combinations(items: &[usize], choose: usize) -> Vec<Vec<usize>> {
    if choose == 0 {
        return vec![Vec::new()];
    }
    if items.len() < choose {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (idx, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[idx + 1..], choose - 1) {
            let mut combo = vec![first];
            combo.append(&mut rest);
            out.push(combo);
        }
    }
    out
}

/// Random symmetric matrix with entries drawn from [-0.5, 0.5), dense
/// pattern, built triplet by triplet (independent of the generators
/// module).
pub fn random_symmetric_dense(n: usize, seed: u64) -> SparseMatrix {
    let mut rng = rng_from_seed(seed);
    let mut triplets = Vec::new();
    for i in 0..n {
        for j in i..n {
            let v = uniform_f64(&mut rng) - 0.5;
            triplets.push((i, j, v));
            if i != j {
                triplets.push((j, i, v));
            }
        }
    }
    SparseMatrix::from_triplets(n, n, &triplets).unwrap()
}

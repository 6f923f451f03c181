//! Test-matrix generators: finite-difference Laplacians (uniform or
//! skyscraper coefficients) and seeded uniform random matrices.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, SparseMatrix};
use crate::rng::{rng_from_seed, uniform_f64, uniform_index};

/// Cell-coefficient law for [`gen_laplacian`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientField {
    /// Constant coefficient 1.
    Uniform,
    /// Piecewise-constant jumps: each cubic subdomain of the grid gets a
    /// coefficient 10^d with d drawn from {0, 1, 2, 3} by the seeded
    /// generator.
    Skyscraper { seed: u64 },
}

/// 3/5/7-point finite-difference Laplacian on a 1-3 dimensional grid with
/// Dirichlet boundary. Edge weights are arithmetic means of the adjacent
/// cell coefficients; each boundary face contributes the cell's own
/// coefficient to the diagonal, so the uniform 1D operator is exactly
/// tridiag(-1, 2, -1).
pub fn gen_laplacian(dims: &[usize], field: CoefficientField) -> Result<SparseMatrix> {
    if dims.is_empty() || dims.len() > 3 {
        return Err(Error::InvalidArgument(format!(
            "grid must have 1-3 dimensions, got {}",
            dims.len()
        )));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidArgument("grid sizes must be >= 1".into()));
    }
    let mut full = [1usize; 3];
    full[..dims.len()].copy_from_slice(dims);
    let [nx, ny, nz] = full;
    let n = nx * ny * nz;

    let coeff = cell_coefficients(full, field);
    let index = |x: usize, y: usize, z: usize| (z * ny + y) * nx + x;

    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(7 * n);
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let i = index(x, y, z);
                let ci = coeff[i];
                // each face: Some(neighbor) or None for a Dirichlet boundary
                let mut faces: Vec<Option<usize>> = Vec::with_capacity(6);
                faces.push((x > 0).then(|| index(x - 1, y, z)));
                faces.push((x + 1 < nx).then(|| index(x + 1, y, z)));
                if dims.len() >= 2 {
                    faces.push((y > 0).then(|| index(x, y - 1, z)));
                    faces.push((y + 1 < ny).then(|| index(x, y + 1, z)));
                }
                if dims.len() >= 3 {
                    faces.push((z > 0).then(|| index(x, y, z - 1)));
                    faces.push((z + 1 < nz).then(|| index(x, y, z + 1)));
                }
                let mut diag = 0.0;
                for face in faces {
                    match face {
                        Some(j) => {
                            let w = 0.5 * (ci + coeff[j]);
                            diag += w;
                            triplets.push((i, j, -w));
                        }
                        None => diag += ci,
                    }
                }
                triplets.push((i, i, diag));
            }
        }
    }
    SparseMatrix::from_triplets(n, n, &triplets)
}

/// One coefficient per grid cell. Subdomain edge length scales with the
/// smallest grid dimension so small grids still see jumps.
fn cell_coefficients(dims: [usize; 3], field: CoefficientField) -> Vec<f64> {
    let [nx, ny, nz] = dims;
    let n = nx * ny * nz;
    match field {
        CoefficientField::Uniform => vec![1.0; n],
        CoefficientField::Skyscraper { seed } => {
            let min_dim = dims.iter().copied().filter(|&d| d > 1).min().unwrap_or(1);
            let edge = (min_dim.div_ceil(5)).max(1);
            let blocks = [nx.div_ceil(edge), ny.div_ceil(edge), nz.div_ceil(edge)];
            let mut rng = rng_from_seed(seed);
            let exponents: Vec<f64> = (0..blocks[0] * blocks[1] * blocks[2])
                .map(|_| uniform_index(&mut rng, 4) as f64)
                .collect();
            let mut coeff = vec![0.0; n];
            for z in 0..nz {
                for y in 0..ny {
                    for x in 0..nx {
                        let b = ((z / edge) * blocks[1] + (y / edge)) * blocks[0] + (x / edge);
                        coeff[(z * ny + y) * nx + x] = 10f64.powf(exponents[b]);
                    }
                }
            }
            coeff
        }
    }
}

/// Dense matrix with entries i.i.d. uniform on [0, 1), deterministic per seed.
pub fn gen_dense_random(nrows: usize, ncols: usize, seed: u64) -> DenseMatrix {
    let mut rng = rng_from_seed(seed);
    let data: Vec<f64> = (0..nrows * ncols).map(|_| uniform_f64(&mut rng)).collect();
    DenseMatrix::from_vec(nrows, ncols, data)
}

/// (R + R^T) / 2 for R = gen_dense_random(n, n, seed), stored as CSR with
/// the symmetric flag set.
pub fn gen_random_symmetric(n: usize, seed: u64) -> SparseMatrix {
    let r = gen_dense_random(n, n, seed);
    let mut s = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = 0.5 * (r[(i, j)] + r[(j, i)]);
        }
    }
    s.to_sparse()
}

/// General random matrix stored as CSR.
pub fn gen_random_sparse(nrows: usize, ncols: usize, seed: u64) -> SparseMatrix {
    gen_dense_random(nrows, ncols, seed).to_sparse()
}

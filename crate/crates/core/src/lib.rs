//! Eigenvalue and singular value estimation for sparse real matrices via
//! randomized aggregation-based coarse grids.
//!
//! The idea: build many small coarse operators A_c = P^T A P from random
//! node aggregations with column-normalized piecewise-constant P. By the
//! Poincare separation theorem the coarse eigenvalues interlace the fine
//! ones, so they make good shifts; each is refined on the fine grid with
//! shift-invert inverse iteration, and the converged values are gathered
//! and deduplicated across samples. A two-sided variant B = U^T A V does
//! the same for singular values of rectangular matrices. Samples never
//! communicate, so they parallelize trivially and deterministically.

pub mod aggregation;
pub mod cli;
pub mod coarsen;
pub mod dense_eig;
pub mod error;
pub mod fine_solver;
pub mod generators;
pub mod market;
pub mod matrix;
pub mod pipeline;
pub mod report;
pub mod rng;

mod lu;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, GershgorinDisc, SparseMatrix};

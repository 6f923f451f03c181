//! C ABI over the specoarse estimation pipelines.
//!
//! Matrices and estimates are opaque handles created and destroyed through
//! this interface; every entry point returns a [`SpecoarseStatus`] and
//! catches panics at the boundary. The generated header lands in
//! `include/specoarse.h`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use specoarse::error::Error;
use specoarse::matrix::SparseMatrix;
use specoarse::pipeline::{
    estimate_eigenvalues, estimate_singular_values, extreme_eigenvalues, extreme_singular_values,
    Partitioner, SampleConfig, ShiftTarget, SpectrumEstimate,
};

/// Status code returned by every specoarse entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecoarseStatus {
    Ok = 0,
    NullPointer = 1,
    Utf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    UnsupportedFormat = 5,
    IndexOutOfRange = 6,
    DimensionMismatch = 7,
    NotSquare = 8,
    NotSymmetric = 9,
    NoConvergence = 10,
    EmptyEstimate = 11,
    Io = 12,
    Panic = 13,
}

impl From<&Error> for SpecoarseStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::IndexOutOfRange { .. } => SpecoarseStatus::IndexOutOfRange,
            Error::Parse { .. } => SpecoarseStatus::Parse,
            Error::UnsupportedFormat(_) => SpecoarseStatus::UnsupportedFormat,
            Error::DimensionMismatch(_) => SpecoarseStatus::DimensionMismatch,
            Error::NotSquare { .. } => SpecoarseStatus::NotSquare,
            Error::NotSymmetric => SpecoarseStatus::NotSymmetric,
            Error::InvalidAggregateCount { .. } => SpecoarseStatus::InvalidArgument,
            Error::RequiresNormalized => SpecoarseStatus::InvalidArgument,
            Error::NoConvergence(_) => SpecoarseStatus::NoConvergence,
            Error::EmptyEstimate => SpecoarseStatus::EmptyEstimate,
            Error::Io { .. } => SpecoarseStatus::Io,
            Error::InvalidArgument(_) => SpecoarseStatus::InvalidArgument,
        }
    }
}

/// Partitioner selector for [`SpecoarseConfig`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecoarsePartitioner {
    StrongCoupling = 0,
    Bfs = 1,
    Random = 2,
}

/// Estimation controls; mirrors the library's sample configuration.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SpecoarseConfig {
    /// Number of coarse-grid samples J (>= 1).
    pub samples: u32,
    /// Values refined per sample k (>= 1).
    pub per_sample: u32,
    /// Coarse dimension handed to the partitioner.
    pub n_aggregates: u32,
    pub partitioner: SpecoarsePartitioner,
    /// Strong-coupling threshold; only read for the strong partitioner.
    pub beta: f64,
    /// Nonzero: column-normalized interpolation (required for the
    /// interlacing guarantees). Zero reproduces the unit-entry operator.
    pub normalized: u8,
    pub seed: u64,
    /// Refinement tolerance (e.g. 1e-10).
    pub tol: f64,
    /// Refinement iteration cap per shift.
    pub max_iters: u32,
}

/// Opaque sparse matrix handle.
pub struct SpecoarseMatrix {
    inner: SparseMatrix,
}

/// Opaque estimate handle.
pub struct SpecoarseEstimate {
    inner: SpectrumEstimate,
}

fn config_to_sample(config: &SpecoarseConfig) -> SampleConfig {
    SampleConfig {
        samples: config.samples as usize,
        per_sample: config.per_sample as usize,
        n_aggregates: config.n_aggregates as usize,
        partitioner: match config.partitioner {
            SpecoarsePartitioner::StrongCoupling => Partitioner::StrongCoupling {
                beta: config.beta,
            },
            SpecoarsePartitioner::Bfs => Partitioner::Bfs,
            SpecoarsePartitioner::Random => Partitioner::Random,
        },
        normalized: config.normalized != 0,
        seed: config.seed,
        tol: config.tol,
        max_iters: config.max_iters as usize,
        target: ShiftTarget::Smallest,
    }
}

fn guard(body: impl FnOnce() -> SpecoarseStatus) -> SpecoarseStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(SpecoarseStatus::Panic)
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> SpecoarseStatus {
    if out.is_null() {
        return SpecoarseStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    SpecoarseStatus::Ok
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn specoarse_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Static name for a status code.
#[no_mangle]
pub extern "C" fn specoarse_status_name(status: SpecoarseStatus) -> *const c_char {
    let name: &'static str = match status {
        SpecoarseStatus::Ok => "ok\0",
        SpecoarseStatus::NullPointer => "null pointer\0",
        SpecoarseStatus::Utf8 => "invalid utf-8\0",
        SpecoarseStatus::InvalidArgument => "invalid argument\0",
        SpecoarseStatus::Parse => "parse error\0",
        SpecoarseStatus::UnsupportedFormat => "unsupported format\0",
        SpecoarseStatus::IndexOutOfRange => "index out of range\0",
        SpecoarseStatus::DimensionMismatch => "dimension mismatch\0",
        SpecoarseStatus::NotSquare => "matrix not square\0",
        SpecoarseStatus::NotSymmetric => "matrix not symmetric\0",
        SpecoarseStatus::NoConvergence => "no convergence\0",
        SpecoarseStatus::EmptyEstimate => "empty estimate\0",
        SpecoarseStatus::Io => "io error\0",
        SpecoarseStatus::Panic => "internal panic\0",
    };
    name.as_ptr() as *const c_char
}

/// Build a sparse matrix from `nnz` triplets. Duplicate positions are
/// summed; the symmetry flag is established by verification.
///
/// # Safety
/// `rows`, `cols`, and `values` must point to `nnz` readable elements and
/// `out` must be a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn specoarse_matrix_from_triplets(
    nrows: usize,
    ncols: usize,
    nnz: usize,
    rows: *const usize,
    cols: *const usize,
    values: *const f64,
    out: *mut *mut SpecoarseMatrix,
) -> SpecoarseStatus {
    guard(|| {
        if (nnz > 0 && (rows.is_null() || cols.is_null() || values.is_null())) || out.is_null() {
            return SpecoarseStatus::NullPointer;
        }
        let rows = unsafe { std::slice::from_raw_parts(rows, nnz) };
        let cols = unsafe { std::slice::from_raw_parts(cols, nnz) };
        let values = unsafe { std::slice::from_raw_parts(values, nnz) };
        let triplets: Vec<(usize, usize, f64)> = rows
            .iter()
            .zip(cols)
            .zip(values)
            .map(|((&r, &c), &v)| (r, c, v))
            .collect();
        match SparseMatrix::from_triplets(nrows, ncols, &triplets) {
            Ok(m) => unsafe { write_handle(out, SpecoarseMatrix { inner: m }) },
            Err(e) => (&e).into(),
        }
    })
}

/// Load a Matrix Market coordinate file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid
/// destination pointer.
#[no_mangle]
pub unsafe extern "C" fn specoarse_matrix_load_market(
    path: *const c_char,
    out: *mut *mut SpecoarseMatrix,
) -> SpecoarseStatus {
    guard(|| {
        if path.is_null() || out.is_null() {
            return SpecoarseStatus::NullPointer;
        }
        let path = match unsafe { CStr::from_ptr(path) }.to_str() {
            Ok(p) => p,
            Err(_) => return SpecoarseStatus::Utf8,
        };
        match specoarse::market::load_matrix_market(path) {
            Ok(m) => unsafe { write_handle(out, SpecoarseMatrix { inner: m }) },
            Err(e) => (&e).into(),
        }
    })
}

/// # Safety
/// `matrix` must be null or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn specoarse_matrix_nrows(matrix: *const SpecoarseMatrix) -> usize {
    if matrix.is_null() {
        return 0;
    }
    unsafe { &*matrix }.inner.nrows()
}

/// # Safety
/// `matrix` must be null or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn specoarse_matrix_ncols(matrix: *const SpecoarseMatrix) -> usize {
    if matrix.is_null() {
        return 0;
    }
    unsafe { &*matrix }.inner.ncols()
}

/// # Safety
/// `matrix` must be null or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn specoarse_matrix_nnz(matrix: *const SpecoarseMatrix) -> usize {
    if matrix.is_null() {
        return 0;
    }
    unsafe { &*matrix }.inner.nnz()
}

/// Nonzero when the matrix carries the verified symmetry flag.
///
/// # Safety
/// `matrix` must be null or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn specoarse_matrix_is_symmetric(matrix: *const SpecoarseMatrix) -> u8 {
    if matrix.is_null() {
        return 0;
    }
    u8::from(unsafe { &*matrix }.inner.is_symmetric())
}

/// Release a matrix handle. A null handle is a no-op.
///
/// # Safety
/// `matrix` must be null or a pointer previously returned by a
/// specoarse_matrix_* constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn specoarse_matrix_free(matrix: *mut SpecoarseMatrix) {
    if !matrix.is_null() {
        drop(unsafe { Box::from_raw(matrix) });
    }
}

/// Estimate eigenvalues of a symmetric matrix.
///
/// # Safety
/// `matrix` must be a live matrix handle; `config` and `out` must be valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn specoarse_estimate_eigenvalues(
    matrix: *const SpecoarseMatrix,
    config: *const SpecoarseConfig,
    out: *mut *mut SpecoarseEstimate,
) -> SpecoarseStatus {
    guard(|| {
        if matrix.is_null() || config.is_null() || out.is_null() {
            return SpecoarseStatus::NullPointer;
        }
        let cfg = config_to_sample(unsafe { &*config });
        match estimate_eigenvalues(&unsafe { &*matrix }.inner, &cfg) {
            Ok(est) => unsafe { write_handle(out, SpecoarseEstimate { inner: est }) },
            Err(e) => (&e).into(),
        }
    })
}

/// Estimate singular values of an arbitrary rectangular matrix. The
/// partitioner field is ignored; two-sided coarsening always uses random
/// partitions.
///
/// # Safety
/// As for [`specoarse_estimate_eigenvalues`].
#[no_mangle]
pub unsafe extern "C" fn specoarse_estimate_singular_values(
    matrix: *const SpecoarseMatrix,
    config: *const SpecoarseConfig,
    out: *mut *mut SpecoarseEstimate,
) -> SpecoarseStatus {
    guard(|| {
        if matrix.is_null() || config.is_null() || out.is_null() {
            return SpecoarseStatus::NullPointer;
        }
        let mut cfg = config_to_sample(unsafe { &*config });
        cfg.partitioner = Partitioner::Random;
        cfg.normalized = true;
        match estimate_singular_values(&unsafe { &*matrix }.inner, &cfg) {
            Ok(est) => unsafe { write_handle(out, SpecoarseEstimate { inner: est }) },
            Err(e) => (&e).into(),
        }
    })
}

/// Number of deduplicated values in an estimate.
///
/// # Safety
/// `estimate` must be null or a live estimate handle.
#[no_mangle]
pub unsafe extern "C" fn specoarse_estimate_len(estimate: *const SpecoarseEstimate) -> usize {
    if estimate.is_null() {
        return 0;
    }
    unsafe { &*estimate }.inner.values.len()
}

/// Number of refinements that failed to converge and were left out.
///
/// # Safety
/// `estimate` must be null or a live estimate handle.
#[no_mangle]
pub unsafe extern "C" fn specoarse_estimate_rejected(estimate: *const SpecoarseEstimate) -> usize {
    if estimate.is_null() {
        return 0;
    }
    unsafe { &*estimate }.inner.rejected
}

/// Copy the estimate's values (eigenvalues ascending, singular values
/// descending) into `buffer`, which holds `capacity` doubles. Returns the
/// number of values written.
///
/// # Safety
/// `buffer` must point to `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn specoarse_estimate_values(
    estimate: *const SpecoarseEstimate,
    buffer: *mut f64,
    capacity: usize,
) -> usize {
    if estimate.is_null() || buffer.is_null() {
        return 0;
    }
    let values = &unsafe { &*estimate }.inner.values;
    let n = values.len().min(capacity);
    unsafe { ptr::copy_nonoverlapping(values.as_ptr(), buffer, n) };
    n
}

/// Release an estimate handle. A null handle is a no-op.
///
/// # Safety
/// `estimate` must be null or a pointer previously returned by a
/// specoarse_estimate_* constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn specoarse_estimate_free(estimate: *mut SpecoarseEstimate) {
    if !estimate.is_null() {
        drop(unsafe { Box::from_raw(estimate) });
    }
}

/// Extreme eigenvalues from coarse samples only (inner bounds of the true
/// extremes). `refine` nonzero polishes both ends on the fine grid.
///
/// # Safety
/// `matrix`, `out_min`, and `out_max` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn specoarse_extreme_eigenvalues(
    matrix: *const SpecoarseMatrix,
    samples: u32,
    n_aggregates: u32,
    seed: u64,
    refine: u8,
    out_min: *mut f64,
    out_max: *mut f64,
) -> SpecoarseStatus {
    guard(|| {
        if matrix.is_null() || out_min.is_null() || out_max.is_null() {
            return SpecoarseStatus::NullPointer;
        }
        match extreme_eigenvalues(
            &unsafe { &*matrix }.inner,
            samples as usize,
            n_aggregates as usize,
            Partitioner::Random,
            seed,
            refine != 0,
        ) {
            Ok((lo, hi)) => {
                unsafe {
                    *out_min = lo;
                    *out_max = hi;
                }
                SpecoarseStatus::Ok
            }
            Err(e) => (&e).into(),
        }
    })
}

/// Extreme singular values from two-sided coarse samples.
///
/// # Safety
/// As for [`specoarse_extreme_eigenvalues`].
#[no_mangle]
pub unsafe extern "C" fn specoarse_extreme_singular_values(
    matrix: *const SpecoarseMatrix,
    samples: u32,
    n_aggregates: u32,
    seed: u64,
    refine: u8,
    out_min: *mut f64,
    out_max: *mut f64,
) -> SpecoarseStatus {
    guard(|| {
        if matrix.is_null() || out_min.is_null() || out_max.is_null() {
            return SpecoarseStatus::NullPointer;
        }
        match extreme_singular_values(
            &unsafe { &*matrix }.inner,
            samples as usize,
            n_aggregates as usize,
            seed,
            refine != 0,
        ) {
            Ok((lo, hi)) => {
                unsafe {
                    *out_min = lo;
                    *out_max = hi;
                }
                SpecoarseStatus::Ok
            }
            Err(e) => (&e).into(),
        }
    })
}

#ifndef SPECOARSE_H
#define SPECOARSE_H

/* Generated with cbindgen:0.29.4 */

/* This header is generated by cbindgen from specoarse-capi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every specoarse entry point.
typedef enum SpecoarseStatus {
  SPECOARSE_STATUS_OK = 0,
  SPECOARSE_STATUS_NULL_POINTER = 1,
  SPECOARSE_STATUS_UTF8 = 2,
  SPECOARSE_STATUS_INVALID_ARGUMENT = 3,
  SPECOARSE_STATUS_PARSE = 4,
  SPECOARSE_STATUS_UNSUPPORTED_FORMAT = 5,
  SPECOARSE_STATUS_INDEX_OUT_OF_RANGE = 6,
  SPECOARSE_STATUS_DIMENSION_MISMATCH = 7,
  SPECOARSE_STATUS_NOT_SQUARE = 8,
  SPECOARSE_STATUS_NOT_SYMMETRIC = 9,
  SPECOARSE_STATUS_NO_CONVERGENCE = 10,
  SPECOARSE_STATUS_EMPTY_ESTIMATE = 11,
  SPECOARSE_STATUS_IO = 12,
  SPECOARSE_STATUS_PANIC = 13,
} SpecoarseStatus;

// Partitioner selector for [`SpecoarseConfig`].
typedef enum SpecoarsePartitioner {
  SPECOARSE_PARTITIONER_STRONG_COUPLING = 0,
  SPECOARSE_PARTITIONER_BFS = 1,
  SPECOARSE_PARTITIONER_RANDOM = 2,
} SpecoarsePartitioner;

// Opaque estimate handle.
typedef struct SpecoarseEstimate SpecoarseEstimate;

// Opaque sparse matrix handle.
typedef struct SpecoarseMatrix SpecoarseMatrix;

// Estimation controls; mirrors the library's sample configuration.
typedef struct SpecoarseConfig {
  // Number of coarse-grid samples J (>= 1).
  uint32_t samples;
  // Values refined per sample k (>= 1).
  uint32_t per_sample;
  // Coarse dimension handed to the partitioner.
  uint32_t n_aggregates;
  enum SpecoarsePartitioner partitioner;
  // Strong-coupling threshold; only read for the strong partitioner.
  double beta;
  // Nonzero: column-normalized interpolation (required for the
  // interlacing guarantees). Zero reproduces the unit-entry operator.
  uint8_t normalized;
  uint64_t seed;
  // Refinement tolerance (e.g. 1e-10).
  double tol;
  // Refinement iteration cap per shift.
  uint32_t max_iters;
} SpecoarseConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *specoarse_version(void);

// Static name for a status code.
const char *specoarse_status_name(enum SpecoarseStatus status);

// Build a sparse matrix from `nnz` triplets. Duplicate positions are
// summed; the symmetry flag is established by verification.
//
// # Safety
// `rows`, `cols`, and `values` must point to `nnz` readable elements and
// `out` must be a valid destination pointer.
enum SpecoarseStatus specoarse_matrix_from_triplets(size_t nrows,
                                                    size_t ncols,
                                                    size_t nnz,
                                                    const size_t *rows,
                                                    const size_t *cols,
                                                    const double *values,
                                                    struct SpecoarseMatrix **out);

// Load a Matrix Market coordinate file.
//
// # Safety
// `path` must be a valid NUL-terminated string and `out` a valid
// destination pointer.
enum SpecoarseStatus specoarse_matrix_load_market(const char *path, struct SpecoarseMatrix **out);

// # Safety
// `matrix` must be null or a live matrix handle.
size_t specoarse_matrix_nrows(const struct SpecoarseMatrix *matrix);

// # Safety
// `matrix` must be null or a live matrix handle.
size_t specoarse_matrix_ncols(const struct SpecoarseMatrix *matrix);

// # Safety
// `matrix` must be null or a live matrix handle.
size_t specoarse_matrix_nnz(const struct SpecoarseMatrix *matrix);

// Nonzero when the matrix carries the verified symmetry flag.
//
// # Safety
// `matrix` must be null or a live matrix handle.
uint8_t specoarse_matrix_is_symmetric(const struct SpecoarseMatrix *matrix);

// Release a matrix handle. A null handle is a no-op.
//
// # Safety
// `matrix` must be null or a pointer previously returned by a
// specoarse_matrix_* constructor, not yet freed.
void specoarse_matrix_free(struct SpecoarseMatrix *matrix);

// Estimate eigenvalues of a symmetric matrix.
//
// # Safety
// `matrix` must be a live matrix handle; `config` and `out` must be valid
// pointers.
enum SpecoarseStatus specoarse_estimate_eigenvalues(const struct SpecoarseMatrix *matrix,
                                                    const struct SpecoarseConfig *config,
                                                    struct SpecoarseEstimate **out);

// Estimate singular values of an arbitrary rectangular matrix. The
// partitioner field is ignored; two-sided coarsening always uses random
// partitions.
//
// # Safety
// As for [`specoarse_estimate_eigenvalues`].
enum SpecoarseStatus specoarse_estimate_singular_values(const struct SpecoarseMatrix *matrix,
                                                        const struct SpecoarseConfig *config,
                                                        struct SpecoarseEstimate **out);

// Number of deduplicated values in an estimate.
//
// # Safety
// `estimate` must be null or a live estimate handle.
size_t specoarse_estimate_len(const struct SpecoarseEstimate *estimate);

// Number of refinements that failed to converge and were left out.
//
// # Safety
// `estimate` must be null or a live estimate handle.
size_t specoarse_estimate_rejected(const struct SpecoarseEstimate *estimate);

// Copy the estimate's values (eigenvalues ascending, singular values
// descending) into `buffer`, which holds `capacity` doubles. Returns the
// number of values written.
//
// # Safety
// `buffer` must point to `capacity` writable doubles.
size_t specoarse_estimate_values(const struct SpecoarseEstimate *estimate,
                                 double *buffer,
                                 size_t capacity);

// Release an estimate handle. A null handle is a no-op.
//
// # Safety
// `estimate` must be null or a pointer previously returned by a
// specoarse_estimate_* constructor, not yet freed.
void specoarse_estimate_free(struct SpecoarseEstimate *estimate);

// Extreme eigenvalues from coarse samples only (inner bounds of the true
// extremes). `refine` nonzero polishes both ends on the fine grid.
//
// # Safety
// `matrix`, `out_min`, and `out_max` must be valid pointers.
enum SpecoarseStatus specoarse_extreme_eigenvalues(const struct SpecoarseMatrix *matrix,
                                                   uint32_t samples,
                                                   uint32_t n_aggregates,
                                                   uint64_t seed,
                                                   uint8_t refine,
                                                   double *out_min,
                                                   double *out_max);

// Extreme singular values from two-sided coarse samples.
//
// # Safety
// As for [`specoarse_extreme_eigenvalues`].
enum SpecoarseStatus specoarse_extreme_singular_values(const struct SpecoarseMatrix *matrix,
                                                       uint32_t samples,
                                                       uint32_t n_aggregates,
                                                       uint64_t seed,
                                                       uint8_t refine,
                                                       double *out_min,
                                                       double *out_max);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECOARSE_H */

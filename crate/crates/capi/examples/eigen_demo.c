/* Minimal C consumer: build a tridiagonal matrix, estimate its smallest
 * eigenvalues from randomized coarse grids, print them.
 *
 * Build (from the workspace root, after `cargo build -p specoarse-capi`):
 *   cc -std=c99 -Icrates/capi/include crates/capi/examples/eigen_demo.c \
 *      target/debug/libspecoarse_capi.a -lpthread -ldl -lm -o eigen_demo
 */
#include <stdio.h>
#include <stdlib.h>

#include "specoarse.h"

int main(void) {
    enum { N = 32 };
    size_t rows[3 * N];
    size_t cols[3 * N];
    double values[3 * N];
    size_t nnz = 0;
    for (size_t i = 0; i < N; i++) {
        if (i > 0) {
            rows[nnz] = i;
            cols[nnz] = i - 1;
            values[nnz++] = -1.0;
        }
        rows[nnz] = i;
        cols[nnz] = i;
        values[nnz++] = 2.0;
        if (i + 1 < N) {
            rows[nnz] = i;
            cols[nnz] = i + 1;
            values[nnz++] = -1.0;
        }
    }

    SpecoarseMatrix *matrix = NULL;
    SpecoarseStatus status =
        specoarse_matrix_from_triplets(N, N, nnz, rows, cols, values, &matrix);
    if (status != SPECOARSE_STATUS_OK) {
        fprintf(stderr, "matrix: %s\n", specoarse_status_name(status));
        return 1;
    }

    SpecoarseConfig config = {
        .samples = 4,
        .per_sample = 3,
        .n_aggregates = 8,
        .partitioner = SPECOARSE_PARTITIONER_RANDOM,
        .beta = 0.25,
        .normalized = 1,
        .seed = 42,
        .tol = 1e-10,
        .max_iters = 200,
    };
    SpecoarseEstimate *estimate = NULL;
    status = specoarse_estimate_eigenvalues(matrix, &config, &estimate);
    if (status != SPECOARSE_STATUS_OK) {
        fprintf(stderr, "estimate: %s\n", specoarse_status_name(status));
        specoarse_matrix_free(matrix);
        return 1;
    }

    size_t n = specoarse_estimate_len(estimate);
    double *buffer = malloc(n * sizeof(double));
    specoarse_estimate_values(estimate, buffer, n);
    printf("specoarse %s: %zu eigenvalue estimates (%zu rejected)\n",
           specoarse_version(), n, specoarse_estimate_rejected(estimate));
    for (size_t i = 0; i < n; i++) {
        printf("  %.12f\n", buffer[i]);
    }

    free(buffer);
    specoarse_estimate_free(estimate);
    specoarse_matrix_free(matrix);
    return 0;
}

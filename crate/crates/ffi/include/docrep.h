#ifndef DOCREP_H
#define DOCREP_H

#include <stddef.h>
#include <stdint.h>

typedef enum DocrepStatus {
  DOCREP_STATUS_OK = 0,
  DOCREP_STATUS_NULL_POINTER = 1,
  DOCREP_STATUS_INVALID_ARGUMENT = 2,
  DOCREP_STATUS_IO = 3,
  DOCREP_STATUS_CORRUPT_ARCHIVE = 4,
  DOCREP_STATUS_VERSION_MISMATCH = 5,
  DOCREP_STATUS_KIND_MISMATCH = 6,
  DOCREP_STATUS_DIMENSION_MISMATCH = 7,
  DOCREP_STATUS_ZERO_VECTOR = 8,
  DOCREP_STATUS_DEGENERATE = 9,
  DOCREP_STATUS_BUFFER_TOO_SMALL = 10,
  DOCREP_STATUS_PANIC = 11,
  DOCREP_STATUS_OTHER = 12,
} DocrepStatus;

// Values accepted by the `metric` argument of [`docrep_knn`].
typedef enum DocrepMetric {
  DOCREP_METRIC_COSINE = 0,
  DOCREP_METRIC_EUCLIDEAN = 1,
} DocrepMetric;

// Values accepted by [`DocrepTsneOptions::kernel`].
typedef enum DocrepKernel {
  DOCREP_KERNEL_STUDENT_T = 0,
  DOCREP_KERNEL_GAUSSIAN = 1,
} DocrepKernel;

// A trained paragraph-vector model.
typedef struct DocrepEmbeddingModel DocrepEmbeddingModel;

// A trained topic model.
typedef struct DocrepLdaModel DocrepLdaModel;

// A dense row-major matrix of doubles.
typedef struct DocrepMatrix DocrepMatrix;

typedef struct DocrepTsneOptions {
  double perplexity;
  size_t iterations;
  double learning_rate;
  uint32_t kernel;
  // Nonzero disables early exaggeration.
  uint32_t strict;
  uint64_t seed;
} DocrepTsneOptions;

// Library version as a static NUL-terminated string.
const char *docrep_version(void);

// Message for the last failed call on this thread; empty after a success.
// Valid until the next `docrep_` call on the same thread.
const char *docrep_last_error_message(void);

// Loads an LDA archive into `*out`.
//
// # Safety
// `path` must be a NUL-terminated string and `out` writable.
enum DocrepStatus docrep_lda_load(const char *path, struct DocrepLdaModel **out);

// # Safety
// `model` must be null or a handle from [`docrep_lda_load`], freed once.
void docrep_lda_free(struct DocrepLdaModel *model);

// Documents, topics and vocabulary size; any output pointer may be null.
//
// # Safety
// `model` must be a live handle; non-null outputs must be writable.
enum DocrepStatus docrep_lda_dims(const struct DocrepLdaModel *model,
                                  size_t *docs,
                                  size_t *topics,
                                  size_t *vocab);

// Copies Θ (documents × topics, row-major) into `out`.
//
// # Safety
// `model` must be a live handle and `out` must hold `capacity` doubles.
enum DocrepStatus docrep_lda_theta(const struct DocrepLdaModel *model,
                                   double *out,
                                   size_t capacity);

// Copies Θ into a new matrix handle.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum DocrepStatus docrep_lda_theta_matrix(const struct DocrepLdaModel *model,
                                          struct DocrepMatrix **out);

// Loads a paragraph-vector archive into `*out`.
//
// # Safety
// `path` must be a NUL-terminated string and `out` writable.
enum DocrepStatus docrep_embedding_load(const char *path, struct DocrepEmbeddingModel **out);

// # Safety
// `model` must be null or a handle from [`docrep_embedding_load`], freed once.
void docrep_embedding_free(struct DocrepEmbeddingModel *model);

// Documents, vector size and vocabulary size; any output may be null.
//
// # Safety
// `model` must be a live handle; non-null outputs must be writable.
enum DocrepStatus docrep_embedding_dims(const struct DocrepEmbeddingModel *model,
                                        size_t *docs,
                                        size_t *dim,
                                        size_t *vocab);

// Copies the document vectors (documents × dim, row-major) into `out`.
//
// # Safety
// `model` must be a live handle and `out` must hold `capacity` doubles.
enum DocrepStatus docrep_embedding_doc_vectors(const struct DocrepEmbeddingModel *model,
                                               double *out,
                                               size_t capacity);

// Copies the document vectors into a new matrix handle.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum DocrepStatus docrep_embedding_doc_matrix(const struct DocrepEmbeddingModel *model,
                                              struct DocrepMatrix **out);

// Copies `rows × cols` row-major doubles into a new matrix handle.
//
// # Safety
// `data` must hold `rows * cols` doubles and `out` must be writable.
enum DocrepStatus docrep_matrix_new(size_t rows,
                                    size_t cols,
                                    const double *data,
                                    struct DocrepMatrix **out);

// # Safety
// `m` must be null or a matrix handle, freed once.
void docrep_matrix_free(struct DocrepMatrix *m);

// # Safety
// `m` must be a live handle; non-null outputs must be writable.
enum DocrepStatus docrep_matrix_dims(const struct DocrepMatrix *m, size_t *rows, size_t *cols);

// Nearest rows to row `query_row`, which comes first with distance 0.
// Writes up to `k + 1` entries and stores the count in `*out_len`.
//
// # Safety
// `m` must be a live handle; both output arrays must hold `capacity`
// entries and `out_len` must be writable.
enum DocrepStatus docrep_knn(const struct DocrepMatrix *m,
                             size_t query_row,
                             size_t k,
                             uint32_t metric,
                             size_t *out_indices,
                             double *out_distances,
                             size_t capacity,
                             size_t *out_len);

// The library's default t-SNE settings.
struct DocrepTsneOptions docrep_tsne_default_options(void);

// Embeds the rows of `m` in 2-D, writing `rows × 2` doubles to `out`.
//
// # Safety
// `m` and `options` must be valid; `out` must hold `capacity` doubles.
enum DocrepStatus docrep_tsne(const struct DocrepMatrix *m,
                              const struct DocrepTsneOptions *options,
                              double *out,
                              size_t capacity);

// Cosine similarity of two `len`-vectors.
//
// # Safety
// `a` and `b` must hold `len` doubles and `out` must be writable.
enum DocrepStatus docrep_cosine_similarity(const double *a,
                                           const double *b,
                                           size_t len,
                                           double *out);

#endif  /* DOCREP_H */

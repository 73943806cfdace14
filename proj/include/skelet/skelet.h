/* C interface to the skelet library.
 *
 * Every fallible call returns a skelet_status. On failure the message is
 * available from skelet_last_error() on the same thread until the next
 * failing call. Objects are opaque handles released with their _free
 * function; strings returned through char** are released with
 * skelet_string_free. Column indices are 0-based. Matrix data is row-major.
 */
#ifndef SKELET_H
#define SKELET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SKELET_API __declspec(dllexport)
#else
#define SKELET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum skelet_status {
  SKELET_OK = 0,
  SKELET_INVALID_ARGUMENT = 1,
  SKELET_NON_FINITE = 2,
  SKELET_OUT_OF_RANGE = 3,
  SKELET_RANK_DEFICIENT = 4,
  SKELET_NOT_CONVERGED = 5,
  SKELET_PARSE_ERROR = 6,
  SKELET_IO_ERROR = 7,
  SKELET_TOO_LARGE = 8,
  SKELET_INTERNAL_ERROR = 100
} skelet_status;

typedef enum skelet_algorithm {
  SKELET_RSVD = 0,
  SKELET_GKS = 1,
  SKELET_RGKS = 2,
  SKELET_RID = 3,
  SKELET_LSS = 4
} skelet_algorithm;

typedef enum skelet_pivoter {
  SKELET_GOLUB_BUSINGER = 0,
  SKELET_GU_EISENSTAT = 1
} skelet_pivoter;

typedef struct skelet_matrix skelet_matrix;
typedef struct skelet_lowrank skelet_lowrank;

SKELET_API const char* skelet_version(void);
SKELET_API const char* skelet_status_name(skelet_status status);
SKELET_API const char* skelet_last_error(void);
SKELET_API void skelet_string_free(char* s);

/* Matrices */
SKELET_API skelet_status skelet_matrix_create(size_t rows, size_t cols, const double* data, skelet_matrix** out);
SKELET_API skelet_status skelet_matrix_load(const char* path, skelet_matrix** out);
SKELET_API skelet_status skelet_matrix_save(const skelet_matrix* m, const char* path);
SKELET_API void skelet_matrix_free(skelet_matrix* m);
SKELET_API size_t skelet_matrix_rows(const skelet_matrix* m);
SKELET_API size_t skelet_matrix_cols(const skelet_matrix* m);
/* Copies rows*cols entries into out; len must be at least rows*cols. */
SKELET_API skelet_status skelet_matrix_copy(const skelet_matrix* m, double* out, size_t len);
/* Writes min(rows, cols) singular values in descending order. */
SKELET_API skelet_status skelet_matrix_singular_values(const skelet_matrix* m, double* out, size_t len);

/* Test matrices from `key = value` spec text (n, spectrum, subspace, alpha,
 * delta, seed). */
SKELET_API skelet_status skelet_testgen_build(const char* spec_text, skelet_matrix** out);
/* Finds alpha whose mixed basis has rank-k coherence within 0.005 of target. */
SKELET_API skelet_status skelet_testgen_calibrate(size_t n, size_t k, double target, uint64_t seed, double* alpha,
                                                  double* coherence);

/* Low-rank approximations */
typedef struct skelet_run_options {
  skelet_algorithm algorithm;
  size_t k;
  size_t p; /* oversampling */
  size_t q; /* power iterations (rsvd, rgks) */
  uint64_t seed;
  uint32_t trial;
  skelet_pivoter pivoter;
  double f; /* strong RRQR parameter, > 1 */
  int wide_sketch; /* rid: min(m, 2(k + p)) sketch rows */
} skelet_run_options;

SKELET_API void skelet_run_options_init(skelet_run_options* opts);
SKELET_API skelet_status skelet_run(const skelet_matrix* a, const skelet_run_options* opts, skelet_lowrank** out);
SKELET_API void skelet_lowrank_free(skelet_lowrank* lr);
SKELET_API size_t skelet_lowrank_rank(const skelet_lowrank* lr);
/* Number of skeleton columns (for lss, the k + p sampled columns; 0 for rsvd).
 * Copies up to len of them. */
SKELET_API size_t skelet_lowrank_columns(const skelet_lowrank* lr, size_t* out, size_t len);
SKELET_API skelet_status skelet_lowrank_error(const skelet_lowrank* lr, const skelet_matrix* a, double* spectral,
                                              double* frobenius);
SKELET_API skelet_status skelet_lowrank_matrix(const skelet_lowrank* lr, skelet_matrix** out);

/* Experiments. The CSV is returned in *csv_out. */
SKELET_API skelet_status skelet_sweep(const char* config_text, unsigned workers, const uint64_t* seed_override,
                                      char** csv_out);
SKELET_API skelet_status skelet_projector_experiment(const char* config_text, unsigned workers, char** csv_out);
SKELET_API const char* skelet_sweep_help(void);
SKELET_API const char* skelet_projector_help(void);

/* Exhaustive best k columns; each column array must hold k entries. */
SKELET_API skelet_status skelet_oracle(const skelet_matrix* a, size_t k, size_t* best_spectral, double* err_spectral,
                                       size_t* best_frobenius, double* err_frobenius, uint64_t* subsets);

#ifdef __cplusplus
}
#endif

#endif

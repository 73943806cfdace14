#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "skelet/skelet.h"

static int failures = 0;

#define EXPECT(cond)                                                 \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                    \
    }                                                                \
  } while (0)

static skelet_matrix* rank_two(size_t m, size_t n) {
  double* data = malloc(m * n * sizeof(double));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j) data[i * n + j] = (double)(i + 1) * (double)(j % 3) + cos((double)(i * j));
  skelet_matrix* a = NULL;
  skelet_status st = skelet_matrix_create(m, n, data, &a);
  free(data);
  EXPECT(st == SKELET_OK);
  return a;
}

static void test_basics(void) {
  EXPECT(strcmp(skelet_version(), "0.1.0") == 0);
  EXPECT(strcmp(skelet_status_name(SKELET_OK), "") != 0);
  EXPECT(strcmp(skelet_status_name(SKELET_PARSE_ERROR), skelet_status_name(SKELET_OK)) != 0);

  const double data[6] = {3, 0, 0, 0, 2, 0};
  skelet_matrix* a = NULL;
  EXPECT(skelet_matrix_create(2, 3, data, &a) == SKELET_OK);
  EXPECT(skelet_matrix_rows(a) == 2);
  EXPECT(skelet_matrix_cols(a) == 3);
  double copy[6];
  EXPECT(skelet_matrix_copy(a, copy, 6) == SKELET_OK);
  EXPECT(memcmp(copy, data, sizeof copy) == 0);
  EXPECT(skelet_matrix_copy(a, copy, 5) != SKELET_OK);
  double s[2];
  EXPECT(skelet_matrix_singular_values(a, s, 2) == SKELET_OK);
  EXPECT(fabs(s[0] - 3.0) < 1e-14 && fabs(s[1] - 2.0) < 1e-14);
  skelet_matrix_free(a);

  const double bad[1] = {NAN};
  skelet_matrix* b = NULL;
  EXPECT(skelet_matrix_create(1, 1, bad, &b) == SKELET_OK);
  EXPECT(skelet_matrix_singular_values(b, s, 1) == SKELET_NON_FINITE);
  EXPECT(strlen(skelet_last_error()) > 0);
  skelet_matrix_free(b);
  b = NULL;
  EXPECT(skelet_matrix_load("/nonexistent/skelet.txt", &b) == SKELET_IO_ERROR);
}

static void test_testgen(void) {
  skelet_matrix* a = NULL;
  EXPECT(skelet_testgen_build("n = 32\nspectrum = geometric:0.7\nalpha = 0.3\nseed = 4\n", &a) == SKELET_OK);
  double s[32];
  EXPECT(skelet_matrix_singular_values(a, s, 32) == SKELET_OK);
  for (int i = 0; i < 32; ++i) EXPECT(fabs(s[i] - pow(0.7, i)) < 1e-10);
  skelet_matrix_free(a);

  a = NULL;
  EXPECT(skelet_testgen_build("n = 32\nsubspace = spiral\n", &a) == SKELET_PARSE_ERROR);
  EXPECT(strstr(skelet_last_error(), "line 2") != NULL);

  double alpha = -1, c = -1;
  EXPECT(skelet_testgen_calibrate(256, 8, 0.5, 0, &alpha, &c) == SKELET_OK);
  EXPECT(fabs(c - 0.5) <= 0.005);
  EXPECT(alpha > 0 && alpha < 1);
}

static void test_run(void) {
  const size_t m = 30, n = 24;
  skelet_matrix* a = rank_two(m, n);
  double s[24];
  EXPECT(skelet_matrix_singular_values(a, s, 24) == SKELET_OK);
  const skelet_algorithm algs[5] = {SKELET_RSVD, SKELET_GKS, SKELET_RGKS, SKELET_RID, SKELET_LSS};
  for (int t = 0; t < 5; ++t) {
    skelet_run_options opts;
    skelet_run_options_init(&opts);
    opts.algorithm = algs[t];
    opts.k = 4;
    opts.p = 2;
    opts.seed = 7;
    skelet_lowrank* lr = NULL;
    EXPECT(skelet_run(a, &opts, &lr) == SKELET_OK);
    EXPECT(skelet_lowrank_rank(lr) == 4);
    size_t cols[8];
    const size_t count = skelet_lowrank_columns(lr, cols, 8);
    EXPECT(count == (algs[t] == SKELET_RSVD ? 0u : algs[t] == SKELET_LSS ? 6u : 4u));
    for (size_t i = 0; i < count && i < 8; ++i) EXPECT(cols[i] < n);
    double spec = -1, frob = -1;
    EXPECT(skelet_lowrank_error(lr, a, &spec, &frob) == SKELET_OK);
    EXPECT(spec >= s[4] * (1 - 1e-10));
    EXPECT(frob >= spec);
    skelet_matrix* approx = NULL;
    EXPECT(skelet_lowrank_matrix(lr, &approx) == SKELET_OK);
    EXPECT(skelet_matrix_rows(approx) == m && skelet_matrix_cols(approx) == n);
    skelet_matrix_free(approx);
    skelet_lowrank_free(lr);
  }

  skelet_run_options opts;
  skelet_run_options_init(&opts);
  opts.k = 40;
  skelet_lowrank* lr = NULL;
  EXPECT(skelet_run(a, &opts, &lr) != SKELET_OK);
  EXPECT(lr == NULL);
  EXPECT(strlen(skelet_last_error()) > 0);
  opts.k = 3;
  opts.pivoter = SKELET_GU_EISENSTAT;
  opts.f = 0.5;
  opts.algorithm = SKELET_GKS;
  EXPECT(skelet_run(a, &opts, &lr) == SKELET_INVALID_ARGUMENT);
  skelet_matrix_free(a);
}

static void test_experiments(void) {
  const char* cfg = "algorithms = rsvd, rgks\nranks = 2\ntrials = 3\n[matrix]\nn = 16\n";
  char* one = NULL;
  char* two = NULL;
  EXPECT(skelet_sweep(cfg, 1, NULL, &one) == SKELET_OK);
  EXPECT(skelet_sweep(cfg, 2, NULL, &two) == SKELET_OK);
  EXPECT(one && two && strcmp(one, two) == 0);
  EXPECT(strncmp(one, "# skelet-csv v1", 15) == 0);
  uint64_t seed = 123;
  char* other = NULL;
  EXPECT(skelet_sweep(cfg, 1, &seed, &other) == SKELET_OK);
  EXPECT(strcmp(one, other) != 0);
  skelet_string_free(one);
  skelet_string_free(two);
  skelet_string_free(other);

  char* bad = NULL;
  EXPECT(skelet_sweep("ranks = 2\ntrials = 0\n", 1, NULL, &bad) == SKELET_PARSE_ERROR);
  EXPECT(bad == NULL);
  EXPECT(strstr(skelet_sweep_help(), "algorithms") != NULL);

  char* proj = NULL;
  EXPECT(skelet_projector_experiment("n = 32\nk = 4\ntrials = 2\nbins = 4\n", 1, &proj) == SKELET_OK);
  EXPECT(proj && strncmp(proj, "# skelet-projector-csv v1", 25) == 0);
  skelet_string_free(proj);
  EXPECT(strstr(skelet_projector_help(), "kinds") != NULL);

  double data[36];
  for (int i = 0; i < 36; ++i) data[i] = 0;
  data[0 * 6 + 1] = 5;
  data[1 * 6 + 4] = 4;
  data[2 * 6 + 2] = 0.1;
  skelet_matrix* a = NULL;
  EXPECT(skelet_matrix_create(6, 6, data, &a) == SKELET_OK);
  size_t bs[2], bf[2];
  double es = -1, ef = -1;
  uint64_t subsets = 0;
  EXPECT(skelet_oracle(a, 2, bs, &es, bf, &ef, &subsets) == SKELET_OK);
  EXPECT(subsets == 15);
  EXPECT(bs[0] == 1 && bs[1] == 4);
  EXPECT(bf[0] == 1 && bf[1] == 4);
  EXPECT(fabs(es - 0.1) < 1e-12 && fabs(ef - 0.1) < 1e-12);
  EXPECT(skelet_oracle(a, 7, bs, &es, bf, &ef, &subsets) != SKELET_OK);
  skelet_matrix_free(a);
}

int main(void) {
  test_basics();
  test_testgen();
  test_run();
  test_experiments();
  if (failures) fprintf(stderr, "%d check(s) failed\n", failures);
  else printf("c api: all checks passed\n");
  return failures ? 1 : 0;
}

#include "skelet/skelet.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "skelet/bench.hpp"
#include "skelet/error.hpp"
#include "skelet/factor.hpp"
#include "skelet/id.hpp"
#include "skelet/sketching.hpp"
#include "skelet/testgen.hpp"

struct skelet_matrix {
  skelet::Matrix m;
};

struct skelet_lowrank {
  skelet::LowRankApprox approx;
};

namespace {

thread_local std::string last_error;

skelet_status to_status(skelet::ErrorCode code) {
  return static_cast<skelet_status>(static_cast<int>(code));
}

template <typename Fn>
skelet_status guarded(Fn fn) {
  try {
    fn();
    return SKELET_OK;
  } catch (const skelet::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SKELET_TOO_LARGE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SKELET_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return SKELET_INTERNAL_ERROR;
  }
}

void need(bool cond, const char* what) {
  if (!cond) skelet::fail(skelet::ErrorCode::invalid_argument, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* skelet_version(void) { return "0.1.0"; }

const char* skelet_status_name(skelet_status status) {
  switch (status) {
    case SKELET_OK: return "ok";
    case SKELET_INVALID_ARGUMENT: return "invalid argument";
    case SKELET_NON_FINITE: return "non-finite input";
    case SKELET_OUT_OF_RANGE: return "out of range";
    case SKELET_RANK_DEFICIENT: return "rank deficient";
    case SKELET_NOT_CONVERGED: return "not converged";
    case SKELET_PARSE_ERROR: return "parse error";
    case SKELET_IO_ERROR: return "i/o error";
    case SKELET_TOO_LARGE: return "too large";
    case SKELET_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

const char* skelet_last_error(void) { return last_error.c_str(); }

void skelet_string_free(char* s) { std::free(s); }

skelet_status skelet_matrix_create(size_t rows, size_t cols, const double* data, skelet_matrix** out) {
  return guarded([&] {
    need(out != nullptr, "null output handle");
    need(data != nullptr || rows * cols == 0, "null data");
    std::vector<double> v(data, data + rows * cols);
    *out = new skelet_matrix{skelet::Matrix(rows, cols, std::move(v))};
  });
}

skelet_status skelet_matrix_load(const char* path, skelet_matrix** out) {
  return guarded([&] {
    need(path && out, "null argument");
    *out = new skelet_matrix{skelet::load_matrix(path)};
  });
}

skelet_status skelet_matrix_save(const skelet_matrix* m, const char* path) {
  return guarded([&] {
    need(m && path, "null argument");
    skelet::save_matrix(path, m->m);
  });
}

void skelet_matrix_free(skelet_matrix* m) { delete m; }

size_t skelet_matrix_rows(const skelet_matrix* m) { return m ? m->m.rows() : 0; }
size_t skelet_matrix_cols(const skelet_matrix* m) { return m ? m->m.cols() : 0; }

skelet_status skelet_matrix_copy(const skelet_matrix* m, double* out, size_t len) {
  return guarded([&] {
    need(m && out, "null argument");
    need(len >= m->m.size(), "output buffer too small");
    std::memcpy(out, m->m.data().data(), m->m.size() * sizeof(double));
  });
}

skelet_status skelet_matrix_singular_values(const skelet_matrix* m, double* out, size_t len) {
  return guarded([&] {
    need(m && out, "null argument");
    const auto s = skelet::singular_values(m->m);
    need(len >= s.size(), "output buffer too small");
    std::copy(s.begin(), s.end(), out);
  });
}

skelet_status skelet_testgen_build(const char* spec_text, skelet_matrix** out) {
  return guarded([&] {
    need(spec_text && out, "null argument");
    auto tm = skelet::build_test_matrix(skelet::parse_test_matrix_spec(spec_text));
    *out = new skelet_matrix{std::move(tm.a)};
  });
}

skelet_status skelet_testgen_calibrate(size_t n, size_t k, double target, uint64_t seed, double* alpha,
                                       double* coherence) {
  return guarded([&] {
    need(alpha && coherence, "null argument");
    const auto cal = skelet::calibrate_alpha(n, k, target, seed);
    *alpha = cal.alpha;
    *coherence = cal.coherence;
  });
}

void skelet_run_options_init(skelet_run_options* opts) {
  if (!opts) return;
  *opts = skelet_run_options{};
  opts->algorithm = SKELET_RGKS;
  opts->k = 1;
  opts->p = 2;
  opts->pivoter = SKELET_GOLUB_BUSINGER;
  opts->f = 2.0;
}

skelet_status skelet_run(const skelet_matrix* a, const skelet_run_options* opts, skelet_lowrank** out) {
  return guarded([&] {
    need(a && opts && out, "null argument");
    const skelet::PivotOptions pivot{
        opts->pivoter == SKELET_GU_EISENSTAT ? skelet::Pivoter::gu_eisenstat : skelet::Pivoter::golub_businger,
        opts->f};
    const skelet::RsvdConfig rcfg{opts->k, opts->p, opts->q, opts->seed, opts->trial};
    auto build = [&]() -> skelet::LowRankApprox {
      switch (opts->algorithm) {
        case SKELET_RSVD: return skelet::rsvd(a->m, rcfg).as_lowrank();
        case SKELET_GKS: return skelet::gks(a->m, opts->k, pivot).as_lowrank();
        case SKELET_RGKS: return skelet::rgks(a->m, rcfg, pivot).id.as_lowrank();
        case SKELET_RID:
          return skelet::rid(a->m, {opts->k, opts->p, opts->seed, opts->trial, opts->wide_sketch != 0}).as_lowrank();
        case SKELET_LSS: return skelet::lss(a->m, {opts->k, opts->p, opts->seed, opts->trial});
      }
      skelet::fail(skelet::ErrorCode::invalid_argument, "unknown algorithm");
    };
    *out = new skelet_lowrank{build()};
  });
}

void skelet_lowrank_free(skelet_lowrank* lr) { delete lr; }

size_t skelet_lowrank_rank(const skelet_lowrank* lr) { return lr ? lr->approx.b1.cols() : 0; }

size_t skelet_lowrank_columns(const skelet_lowrank* lr, size_t* out, size_t len) {
  if (!lr || !lr->approx.columns) return 0;
  const auto& cols = *lr->approx.columns;
  for (size_t i = 0; out && i < len && i < cols.size(); ++i) out[i] = cols[i];
  return cols.size();
}

skelet_status skelet_lowrank_error(const skelet_lowrank* lr, const skelet_matrix* a, double* spectral,
                                   double* frobenius) {
  return guarded([&] {
    need(lr && a, "null argument");
    const auto err = skelet::approximation_error(a->m, lr->approx);
    if (spectral) *spectral = err.spectral;
    if (frobenius) *frobenius = err.frobenius;
  });
}

skelet_status skelet_lowrank_matrix(const skelet_lowrank* lr, skelet_matrix** out) {
  return guarded([&] {
    need(lr && out, "null argument");
    *out = new skelet_matrix{lr->approx.approximation()};
  });
}

skelet_status skelet_sweep(const char* config_text, unsigned workers, const uint64_t* seed_override,
                           char** csv_out) {
  return guarded([&] {
    need(config_text && csv_out, "null argument");
    auto cfg = skelet::parse_experiment_config(config_text);
    if (seed_override) cfg.seed = *seed_override;
    *csv_out = copy_string(skelet::run_sweep(cfg, workers));
  });
}

skelet_status skelet_projector_experiment(const char* config_text, unsigned workers, char** csv_out) {
  return guarded([&] {
    need(config_text && csv_out, "null argument");
    const auto cfg = skelet::parse_projector_config(config_text);
    *csv_out = copy_string(skelet::projector_error_experiment(cfg, workers));
  });
}

const char* skelet_sweep_help(void) {
  static const std::string text = skelet::experiment_config_help();
  return text.c_str();
}

const char* skelet_projector_help(void) {
  static const std::string text = skelet::projector_config_help();
  return text.c_str();
}

skelet_status skelet_oracle(const skelet_matrix* a, size_t k, size_t* best_spectral, double* err_spectral,
                            size_t* best_frobenius, double* err_frobenius, uint64_t* subsets) {
  return guarded([&] {
    need(a != nullptr, "null argument");
    const auto r = skelet::oracle_best_subset(a->m, k);
    if (best_spectral) std::copy(r.best_spectral.begin(), r.best_spectral.end(), best_spectral);
    if (best_frobenius) std::copy(r.best_frobenius.begin(), r.best_frobenius.end(), best_frobenius);
    if (err_spectral) *err_spectral = r.err_spectral;
    if (err_frobenius) *err_frobenius = r.err_frobenius;
    if (subsets) *subsets = r.subsets;
  });
}

}  // extern "C"

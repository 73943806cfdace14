#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skelet/factor.hpp"
#include "skelet/geometry.hpp"
#include "skelet/id.hpp"
#include "skelet/matrix.hpp"
#include "skelet/testgen.hpp"

namespace skelet {

enum class Algorithm { rsvd, gks, rgks, rid, lss };

std::string to_string(Algorithm alg);
Algorithm parse_algorithm(const std::string& text);

/// Oversampling p for a given rank: fixed, or ceil(k / 10).
struct OversamplingRule {
  bool ceil_k_over_10 = false;
  Index fixed = 2;

  Index for_rank(Index k) const { return ceil_k_over_10 ? (k + 9) / 10 : fixed; }
};

/// One matrix of a sweep: a generated test matrix or a matrix file.
struct MatrixSource {
  TestMatrixSpec spec;
  std::string file;  // when non-empty, load instead of generating
  std::optional<double> coherence_target;  // calibrate alpha before building
  Index calibrate_rank = 0;                // 0 selects the first swept rank
};

struct ExperimentConfig {
  std::vector<MatrixSource> matrices;
  std::vector<Algorithm> algorithms{Algorithm::rsvd, Algorithm::rgks};
  std::vector<Index> ranks;
  OversamplingRule oversampling;
  Index power_iterations = 0;
  Index trials = 100;
  std::uint64_t seed = 0;
  bool spectral_norm = true;
  bool frobenius_norm = true;
  bool bounds = false;
  bool angles = false;
  bool summary = true;
  PivotOptions pivot;
  bool rid_wide_sketch = false;
};

/// Parses the flat `key = value` sweep format; `[matrix]` blocks repeat.
/// Errors name the offending line.
ExperimentConfig parse_experiment_config(const std::string& text);

/// Help text listing every config key.
std::string experiment_config_help();

/// A matrix ready for trials, with its exact SVD.
struct PreparedMatrix {
  Matrix a;
  SvdResult truth;
  double alpha = 0.0;
  std::string description;
};

PreparedMatrix prepare_matrix(const MatrixSource& source, Index default_calibration_rank);

/// Per (trial, algorithm, k) result. Quantities that do not apply to an
/// algorithm, or were not requested, are NaN.
struct TrialRecord {
  Index matrix = 0;
  Index trial = 0;
  Algorithm algorithm = Algorithm::rsvd;
  Index n = 0, k = 0, p = 0, q = 0;
  double alpha = 0.0;
  double coherence = 0.0, gamma = 0.0, stable_rank = 0.0;
  double err_spec = 0.0, err_frob = 0.0, subopt_spec = 0.0, subopt_frob = 0.0;
  double phi_max = 0.0, phi_hat_max = 0.0, theta_max = 0.0, mu = 0.0;
  double bound_thm41 = 0.0, bound_thm52 = 0.0, bound_thm54 = 0.0, bound_gks_spec = 0.0, bound_gks_frob = 0.0;
  std::string applicable_flags;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;  // not part of the CSV (keeps output reproducible)
};

/// Runs one trial of one algorithm on a prepared matrix.
TrialRecord run_trial(const PreparedMatrix& m, const ExperimentConfig& cfg, Algorithm alg, Index k, Index trial,
                      std::uint64_t seed);

/// All trials, sorted by (matrix, k, algorithm, trial); identical for any
/// worker count.
std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, const std::vector<PreparedMatrix>& matrices,
                                    unsigned workers);

/// Nearest-rank quantile: the ceil(q N)-th smallest value (1-based).
double nearest_rank_quantile(std::vector<double> values, double q);

std::string sweep_csv(const ExperimentConfig& cfg, const std::vector<PreparedMatrix>& matrices,
                      const std::vector<TrialRecord>& records);

/// Parse, prepare, run and format.
std::string run_sweep(const ExperimentConfig& cfg, unsigned workers);

struct OracleResult {
  IndexSet best_spectral;
  double err_spectral = 0.0;
  IndexSet best_frobenius;
  double err_frobenius = 0.0;
  std::uint64_t subsets = 0;
};

/// Exhaustive best k-column subset in both norms. Requires C(n, k) <= 1e6.
OracleResult oracle_best_subset(const Matrix& a, Index k);

struct ProjectorConfig {
  Index n = 256, k = 18, p = 5, q = 0, trials = 100;
  std::uint64_t seed = 0;
  std::vector<SubspaceKind> kinds{SubspaceKind::noisy_permutation, SubspaceKind::noisy_hadamard,
                                  SubspaceKind::random_orthogonal};
  SpectrumProfile spectrum;
  double delta = -1.0;
  Index bins = 32;
};

ProjectorConfig parse_projector_config(const std::string& text);
std::string projector_config_help();

struct ProjectorTrial {
  SubspaceKind kind = SubspaceKind::random_orthogonal;
  Index trial = 0;
  ProjectorDistance stats;
};

std::vector<ProjectorTrial> projector_trials(const ProjectorConfig& cfg, unsigned workers = 1);
std::string projector_error_experiment(const ProjectorConfig& cfg, unsigned workers = 1);

/// Default spectrum for projector experiments: geometric decay over the
/// first k + 8 values, then a slowly decaying tail.
SpectrumProfile projector_default_spectrum(Index n, Index k);

}  // namespace skelet

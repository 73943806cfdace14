#pragma once

#include <cstdint>
#include <vector>

#include "skelet/matrix.hpp"
#include "skelet/random.hpp"
#include "skelet/sketching.hpp"

namespace skelet {

enum class Pivoter { golub_businger, gu_eisenstat };

struct PivotOptions {
  Pivoter kind = Pivoter::golub_businger;
  double f = 2.0;  // strong RRQR bound, used by gu_eisenstat only
};

/// Column-subset approximation A ~ A(:, J) * T.
struct InterpolativeDecomp {
  IndexSet columns;
  Matrix b1;  // A(:, J)
  Matrix b2;  // (A(:, J)^+ A)^T
  /// Set when sigma_k <= sigma_{k+1} so the dominant subspace is not unique.
  bool subspace_ill_defined = false;

  LowRankApprox as_lowrank() const { return {b1, b2, columns}; }
};

/// Interpolative decomposition for a given column index set.
InterpolativeDecomp id_from_columns(const Matrix& a, const IndexSet& j);

/// Pivot k rows of an n x k basis (RRQR on its transpose).
IndexSet select_rows_by_pivoting(const Matrix& basis, Index k, const PivotOptions& opts);

/// Golub-Klema-Stewart: RRQR on the top-k right singular vectors of A.
InterpolativeDecomp gks(const Matrix& a, Index k, const PivotOptions& opts = {});
/// GKS when V_k (n x k) and the spectrum are already known.
InterpolativeDecomp gks_from_basis(const Matrix& a, const Matrix& v_k, const std::vector<double>& s,
                                   Index k, const PivotOptions& opts = {});

struct RgksResult {
  InterpolativeDecomp id;
  RsvdResult sketch;  // the approximate singular triplets that were pivoted
};

/// Randomized GKS: RRQR on the right singular vectors returned by rsvd.
RgksResult rgks(const Matrix& a, const RsvdConfig& cfg, const PivotOptions& opts = {});

struct RidConfig {
  Index k = 1;
  Index p = 0;
  std::uint64_t seed = 0;
  std::uint32_t trial = 0;
  /// Use min(m, 2 (k + p)) sketch rows instead of k + p.
  bool wide_sketch = false;
};

/// Randomized ID: CPQR on S * A with S an l x m Gaussian sketch.
InterpolativeDecomp rid(const Matrix& a, const RidConfig& cfg);

struct LssConfig {
  Index k = 1;
  Index p = 0;
  std::uint64_t seed = 0;
  std::uint32_t trial = 0;
};

/// Leverage-score sampling: draws k + p columns with probability
/// proportional to approximate squared leverage scores, then projects onto
/// the leading k left singular vectors of A(:, J).
LowRankApprox lss(const Matrix& a, const LssConfig& cfg);

/// Sequential weighted draws without replacement. Zero-weight entries are
/// only taken once the positive weights are exhausted, in `fallback` order.
IndexSet weighted_sample_without_replacement(const std::vector<double>& weights, Index count,
                                             RngKey key, const IndexSet& fallback = {});

}  // namespace skelet

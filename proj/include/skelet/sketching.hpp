#pragma once

#include <cstdint>
#include <optional>

#include "skelet/factor.hpp"
#include "skelet/matrix.hpp"
#include "skelet/random.hpp"

namespace skelet {

/// Rank-k approximation A ~ B1 * B2^T, optionally tagged with the column
/// indices it was built from.
struct LowRankApprox {
  Matrix b1;  // m x k
  Matrix b2;  // n x k
  std::optional<IndexSet> columns;

  Matrix approximation() const { return mul_nt(b1, b2); }
  Matrix residual(const Matrix& a) const { return a - approximation(); }
};

struct ApproxError {
  double spectral = 0.0;
  double frobenius = 0.0;
};

ApproxError approximation_error(const Matrix& a, const LowRankApprox& approx);
double frobenius_error(const Matrix& a, const LowRankApprox& approx);

struct RsvdConfig {
  Index k = 1;
  Index p = 0;  // oversampling
  Index q = 0;  // power iterations
  std::uint64_t seed = 0;
  std::uint32_t trial = 0;
};

struct RsvdResult {
  Matrix u;              // m x k
  std::vector<double> s;  // k, descending
  Matrix v;              // n x k

  LowRankApprox as_lowrank() const;
};

/// Thin QR of A * omega; returns B1 = Q, B2 = A^T Q. Columns of A * omega
/// beyond its numerical rank are dropped.
LowRankApprox proto_sketch(const Matrix& a, const Matrix& omega);

/// Randomized SVD with a Gaussian n x (k + p) sketch keyed on
/// (seed, trial, sketch), q power iterations with re-orthonormalization after
/// every product, truncated optimally to rank k.
RsvdResult rsvd(const Matrix& a, const RsvdConfig& cfg);

/// Same pipeline with a caller-supplied sketch omega (n x l, l >= k).
RsvdResult rsvd_with_sketch(const Matrix& a, const Matrix& omega, Index k, Index q);

}  // namespace skelet

#include "skelet/sketching.hpp"

#include <algorithm>
#include <cmath>

#include "skelet/error.hpp"
#include "skelet/pivoting.hpp"

namespace skelet {

ApproxError approximation_error(const Matrix& a, const LowRankApprox& approx) {
  const Matrix e = approx.residual(a);
  return {spectral_norm(e), frobenius_norm(e)};
}

double frobenius_error(const Matrix& a, const LowRankApprox& approx) {
  return frobenius_norm(approx.residual(a));
}

LowRankApprox RsvdResult::as_lowrank() const {
  Matrix us = u;
  for (Index i = 0; i < us.rows(); ++i)
    for (Index j = 0; j < s.size(); ++j) us(i, j) *= s[j];
  return {std::move(us), v, std::nullopt};
}

LowRankApprox proto_sketch(const Matrix& a, const Matrix& omega) {
  require(omega.rows() == a.cols(), ErrorCode::invalid_argument, "sketch must have n rows");
  const Matrix y = a * omega;
  LowRankApprox out;
  if (y.cols() == 0 || frobenius_norm(y) == 0.0) {
    out.b1 = Matrix(a.rows(), 0);
    out.b2 = Matrix(a.cols(), 0);
    return out;
  }
  const Index r = std::min(y.rows(), y.cols());
  const PivotedQr f = golub_businger_cpqr(y, r);
  const double lead = std::abs(f.r(0, 0));
  Index rank = 0;
  while (rank < r && std::abs(f.r(rank, rank)) > 1e-12 * lead) ++rank;
  out.b1 = f.q.left_cols(rank);
  out.b2 = mul_tn(a, out.b1);
  return out;
}

RsvdResult rsvd_with_sketch(const Matrix& a, const Matrix& omega, Index k, Index q) {
  require(a.all_finite(), ErrorCode::non_finite, "matrix has non-finite entries");
  const Index m = a.rows(), n = a.cols(), l = omega.cols();
  require(omega.rows() == n, ErrorCode::invalid_argument, "sketch must have n rows");
  require(k >= 1 && k <= l, ErrorCode::invalid_argument, "rsvd needs 1 <= k <= sketch width");
  require(l <= std::min(m, n), ErrorCode::invalid_argument, "k + p must not exceed min(m, n)");

  Matrix qb = orthonormalize(a * omega);
  for (Index it = 0; it < q; ++it) {
    const Matrix z = orthonormalize(mul_tn(a, qb));
    qb = orthonormalize(a * z);
  }
  const Matrix b = mul_tn(qb, a);  // l x n
  const SvdResult f = svd(b);
  RsvdResult out;
  out.u = qb * f.u.left_cols(k);
  out.s.assign(f.s.begin(), f.s.begin() + static_cast<long>(k));
  out.v = f.v.left_cols(k);
  return out;
}

RsvdResult rsvd(const Matrix& a, const RsvdConfig& cfg) {
  require(cfg.k >= 1, ErrorCode::invalid_argument, "rsvd rank must be positive");
  require(cfg.k + cfg.p <= std::min(a.rows(), a.cols()), ErrorCode::invalid_argument,
          "k + p must not exceed min(m, n)");
  const Matrix omega = gaussian(a.cols(), cfg.k + cfg.p, RngKey{cfg.seed, cfg.trial, StreamRole::sketch});
  return rsvd_with_sketch(a, omega, cfg.k, cfg.q);
}

}  // namespace skelet

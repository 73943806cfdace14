#include "skelet/id.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "skelet/error.hpp"
#include "skelet/factor.hpp"
#include "skelet/geometry.hpp"
#include "skelet/pivoting.hpp"

namespace skelet {

namespace {

// C^+ A by Householder least squares when C has full column rank; the SVD
// pseudoinverse otherwise.
Matrix least_squares_coefficients(const Matrix& c, const Matrix& a) {
  const Index k = c.cols();
  if (k > c.rows()) return pseudoinverse(c) * a;
  const QrResult f = householder_qr(c);
  double largest = 0.0, smallest = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < k; ++i) {
    largest = std::max(largest, std::abs(f.r(i, i)));
    smallest = std::min(smallest, std::abs(f.r(i, i)));
  }
  if (!(smallest > 1e-13 * largest)) return pseudoinverse(c) * a;
  Matrix x = mul_tn(f.q, a);
  for (Index col = 0; col < x.cols(); ++col) {
    for (Index i = k; i-- > 0;) {
      double v = x(i, col);
      for (Index t = i + 1; t < k; ++t) v -= f.r(i, t) * x(t, col);
      x(i, col) = v / f.r(i, i);
    }
  }
  return x;
}

}  // namespace

InterpolativeDecomp id_from_columns(const Matrix& a, const IndexSet& j) {
  require(a.all_finite(), ErrorCode::non_finite, "matrix has non-finite entries");
  require(!j.empty(), ErrorCode::invalid_argument, "column index set is empty");
  std::vector<bool> seen(a.cols(), false);
  for (Index c : j) {
    require(c < a.cols(), ErrorCode::out_of_range, "column index out of range");
    require(!seen[c], ErrorCode::invalid_argument, "column index set contains duplicates");
    seen[c] = true;
  }
  InterpolativeDecomp out;
  out.columns = j;
  out.b1 = a.select_cols(j);
  out.b2 = least_squares_coefficients(out.b1, a).transposed();
  return out;
}

IndexSet select_rows_by_pivoting(const Matrix& basis, Index k, const PivotOptions& opts) {
  const Matrix wide = basis.transposed();
  const PivotedQr f = opts.kind == Pivoter::gu_eisenstat ? gu_eisenstat_srrqr(wide, k, opts.f)
                                                         : golub_businger_cpqr(wide, k);
  return f.skeleton();
}

InterpolativeDecomp gks_from_basis(const Matrix& a, const Matrix& v_k, const std::vector<double>& s,
                                   Index k, const PivotOptions& opts) {
  require(k >= 1 && k <= std::min(a.rows(), a.cols()), ErrorCode::out_of_range,
          "GKS rank must satisfy 1 <= k <= min(m, n)");
  require(v_k.rows() == a.cols() && v_k.cols() >= k, ErrorCode::invalid_argument,
          "basis must be n x k");
  InterpolativeDecomp out = id_from_columns(a, select_rows_by_pivoting(v_k.left_cols(k), k, opts));
  out.subspace_ill_defined = k < s.size() && !(s[k - 1] > s[k]);
  return out;
}

InterpolativeDecomp gks(const Matrix& a, Index k, const PivotOptions& opts) {
  require(k >= 1 && k <= std::min(a.rows(), a.cols()), ErrorCode::out_of_range,
          "GKS rank must satisfy 1 <= k <= min(m, n)");
  const SvdResult f = svd(a);
  return gks_from_basis(a, f.v, f.s, k, opts);
}

RgksResult rgks(const Matrix& a, const RsvdConfig& cfg, const PivotOptions& opts) {
  RgksResult out;
  out.sketch = rsvd(a, cfg);
  out.id = id_from_columns(a, select_rows_by_pivoting(out.sketch.v, cfg.k, opts));
  return out;
}

InterpolativeDecomp rid(const Matrix& a, const RidConfig& cfg) {
  require(a.all_finite(), ErrorCode::non_finite, "matrix has non-finite entries");
  const Index m = a.rows(), n = a.cols();
  require(cfg.k >= 1 && cfg.k <= std::min(m, n), ErrorCode::out_of_range,
          "RID rank must satisfy 1 <= k <= min(m, n)");
  Index l = cfg.k + cfg.p;
  if (cfg.wide_sketch) l = std::min(m, 2 * (cfg.k + cfg.p));
  l = std::max(l, cfg.k);
  const Matrix s = gaussian(l, m, RngKey{cfg.seed, cfg.trial, StreamRole::sketch});
  const PivotedQr f = golub_businger_cpqr(s * a, cfg.k);
  return id_from_columns(a, f.skeleton());
}

IndexSet weighted_sample_without_replacement(const std::vector<double>& weights, Index count,
                                             RngKey key, const IndexSet& fallback) {
  const Index n = weights.size();
  require(count <= n, ErrorCode::invalid_argument, "cannot draw more items than available");
  for (double w : weights)
    require(std::isfinite(w) && w >= 0.0, ErrorCode::invalid_argument, "weights must be finite and >= 0");
  Philox rng(key);
  std::vector<double> w = weights;
  std::vector<bool> taken(n, false);
  IndexSet out;
  out.reserve(count);
  while (out.size() < count) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i)
      if (!taken[i]) total += w[i];
    if (!(total > 0.0)) break;
    const double target = rng.uniform() * total;
    double acc = 0.0;
    Index pick = n;
    for (Index i = 0; i < n; ++i) {
      if (taken[i] || w[i] == 0.0) continue;
      acc += w[i];
      pick = i;
      if (acc > target) break;
    }
    taken[pick] = true;
    out.push_back(pick);
  }
  IndexSet order = fallback;
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), Index{0});
  }
  for (Index i : order) {
    if (out.size() >= count) break;
    if (!taken[i]) {
      taken[i] = true;
      out.push_back(i);
    }
  }
  return out;
}

LowRankApprox lss(const Matrix& a, const LssConfig& cfg) {
  const Index m = a.rows(), n = a.cols(), c = cfg.k + cfg.p;
  require(cfg.k >= 1 && c <= std::min(m, n), ErrorCode::out_of_range,
          "LSS needs 1 <= k and k + p <= min(m, n)");
  const RsvdResult approx = rsvd(a, {cfg.k, cfg.p, 0, cfg.seed, cfg.trial});
  std::vector<double> w = leverage_scores(approx.v);
  for (double& x : w) x *= x;

  // Zero-leverage columns are padded in order of decreasing column norm.
  std::vector<double> col_norm(n, 0.0);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) col_norm[j] += a(i, j) * a(i, j);
  IndexSet order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return col_norm[x] > col_norm[y]; });

  const IndexSet j = weighted_sample_without_replacement(w, c, RngKey{cfg.seed, cfg.trial, StreamRole::sampling}, order);
  const SvdResult f = svd(a.select_cols(j));
  LowRankApprox out;
  out.b1 = f.u.left_cols(cfg.k);
  out.b2 = mul_tn(a, out.b1);
  out.columns = j;
  return out;
}

}  // namespace skelet

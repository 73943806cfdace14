#include "skelet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skelet/error.hpp"
#include "skelet/factor.hpp"

namespace skelet {

namespace {

constexpr double kOrthoTol = 1e-8;

void require_orthonormal(const Matrix& q, const char* what) {
  if (orthonormality_defect(q) >= kOrthoTol) fail(ErrorCode::invalid_argument, what);
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void validate_index_set(const IndexSet& j, Index n) {
  std::vector<bool> seen(n, false);
  for (Index idx : j) {
    require(idx < n, ErrorCode::out_of_range, "index set entry out of range");
    require(!seen[idx], ErrorCode::invalid_argument, "index set contains duplicates");
    seen[idx] = true;
  }
}

IndexSet complement(const IndexSet& j, Index n) {
  std::vector<bool> in(n, false);
  for (Index idx : j) in[idx] = true;
  IndexSet c;
  c.reserve(n - j.size());
  for (Index i = 0; i < n; ++i)
    if (!in[i]) c.push_back(i);
  return c;
}

// Combine descending cosines with descending sines into ascending angles.
PrincipalAngles combine(std::vector<double> cosines, std::vector<double> sines_desc) {
  const Index k = cosines.size();
  PrincipalAngles pa;
  for (double& c : cosines) c = clamp01(c);
  pa.angles.resize(k);
  for (Index i = 0; i < k; ++i) {
    const double c = cosines[i];
    const double s = i < sines_desc.size() ? clamp01(sines_desc[k - 1 - i]) : 0.0;
    pa.angles[i] = c * c < 0.5 ? std::acos(c) : std::asin(s);
  }
  // Roundoff can break monotonicity between the two branches by ~1e-16.
  for (Index i = 1; i < k; ++i) pa.angles[i] = std::max(pa.angles[i], pa.angles[i - 1]);
  pa.cosines = std::move(cosines);
  return pa;
}

std::vector<double> padded_singular_values(const Matrix& a, Index k) {
  std::vector<double> s = a.empty() ? std::vector<double>{} : singular_values(a);
  s.resize(k, 0.0);
  return s;
}

}  // namespace

PrincipalAngles principal_angles(const Matrix& x, const Matrix& y) {
  require(x.rows() == y.rows() && x.cols() == y.cols(), ErrorCode::invalid_argument,
          "principal angles need equally shaped bases");
  require_orthonormal(x, "principal angles: X is not orthonormal");
  require_orthonormal(y, "principal angles: Y is not orthonormal");
  const Index k = x.cols();
  if (k == 0) return {};
  const Matrix xty = mul_tn(x, y);
  const Matrix resid = y - x * xty;
  return combine(padded_singular_values(xty, k), padded_singular_values(resid, k));
}

PrincipalAngles angles_to_index_subspace(const Matrix& v_k, const IndexSet& j) {
  const Index n = v_k.rows(), k = v_k.cols();
  require(j.size() == k, ErrorCode::invalid_argument, "index set size must equal k");
  require(2 * k <= n, ErrorCode::invalid_argument, "index-subspace angles require k <= n/2");
  validate_index_set(j, n);
  if (k == 0) return {};
  const Matrix vj = v_k.select_rows(j);
  const Matrix vc = v_k.select_rows(complement(j, n));
  return combine(padded_singular_values(vj, k), padded_singular_values(vc, k));
}

std::vector<double> tangents_of_index_angles(const Matrix& v_k, const IndexSet& j) {
  const Index n = v_k.rows(), k = v_k.cols();
  require(j.size() == k, ErrorCode::invalid_argument, "index set size must equal k");
  validate_index_set(j, n);
  const Matrix vj = v_k.select_rows(j);
  const SvdResult f = svd(vj);
  if (!(f.s.back() > 1e-12))
    fail(ErrorCode::rank_deficient, "V(J, :) is singular: the largest angle equals pi/2");
  // V_J^{-1} = Z diag(1/s) W^T for V_J = W diag(s) Z^T.
  Matrix zs = f.v;
  for (Index r = 0; r < zs.rows(); ++r)
    for (Index c = 0; c < k; ++c) zs(r, c) /= f.s[c];
  const Matrix inv = mul_nt(zs, f.u);
  const Matrix t = v_k.select_rows(complement(j, n)) * inv;
  return padded_singular_values(t, k);
}

std::vector<double> cs_block_tangents(const Matrix& v_full, const IndexSet& j, Index k) {
  const Index n = v_full.rows();
  require(v_full.cols() == n, ErrorCode::invalid_argument, "cs tangents need a square V");
  require(j.size() == k && k < n, ErrorCode::invalid_argument, "index set size must equal k < n");
  validate_index_set(j, n);
  const Matrix rows = v_full.select_rows(j);
  const Matrix v11 = rows.block(0, 0, k, k);
  const Matrix v12 = rows.block(0, k, k, n - k);
  const SvdResult f = svd(v11);
  if (!(f.s.back() > 1e-12))
    fail(ErrorCode::rank_deficient, "V11 is singular: the largest angle equals pi/2");
  Matrix zs = f.v;
  for (Index r = 0; r < zs.rows(); ++r)
    for (Index c = 0; c < k; ++c) zs(r, c) /= f.s[c];
  return padded_singular_values(mul_nt(zs, f.u) * v12, k);
}

SpectrumStats spectrum_stats(const std::vector<double>& s, Index k) {
  require(k >= 1 && k < s.size(), ErrorCode::out_of_range, "spectrum stats need 1 <= k < len(s)");
  for (Index i = 1; i < s.size(); ++i)
    require(s[i] <= s[i - 1] && s[i] >= 0.0, ErrorCode::invalid_argument,
            "singular values must be descending and nonnegative");
  const double tail = s[k];
  if (!(tail > 0.0)) fail(ErrorCode::invalid_argument, "sigma_{k+1} = 0: residual stable rank undefined");
  SpectrumStats st;
  st.gap = s[k - 1] > 0.0 ? tail / s[k - 1] : 0.0;
  st.tail_spectral = tail;
  st.tail_frobenius = norm2(std::span<const double>(s).subspan(k));
  double acc = 0.0;
  for (Index i = k; i < s.size(); ++i) acc += (s[i] / tail) * (s[i] / tail);
  st.residual_stable_rank = acc;
  return st;
}

double generalized_gap(const std::vector<double>& s, Index i, Index j) {
  require(i >= 1 && j >= 1 && i <= s.size() && j <= s.size(), ErrorCode::out_of_range,
          "gap indices out of range");
  require(s[i - 1] > 0.0, ErrorCode::invalid_argument, "gap denominator is zero");
  return s[j - 1] / s[i - 1];
}

std::vector<double> leverage_scores(const Matrix& v_k) {
  std::vector<double> l(v_k.rows());
  for (Index i = 0; i < v_k.rows(); ++i) l[i] = norm2(v_k.row(i));
  return l;
}

double coherence(const Matrix& v_k) {
  const auto l = leverage_scores(v_k);
  return l.empty() ? 0.0 : *std::max_element(l.begin(), l.end());
}

std::vector<double> projector_abs_differences(const Matrix& v, const Matrix& v_hat) {
  require(v.rows() == v_hat.rows() && v.cols() == v_hat.cols(), ErrorCode::invalid_argument,
          "projector comparison needs equally shaped bases");
  Matrix d = mul_nt(v, v) - mul_nt(v_hat, v_hat);
  std::vector<double> out(d.data().begin(), d.data().end());
  for (double& x : out) x = std::abs(x);
  return out;
}

ProjectorDistance projector_distance(const Matrix& v, const Matrix& v_hat) {
  const PrincipalAngles pa = principal_angles(v, v_hat);
  ProjectorDistance pd;
  pd.theta_max = pa.max_angle();
  pd.sin_theta_max = std::sin(pd.theta_max);
  auto diffs = projector_abs_differences(v, v_hat);
  if (diffs.empty()) return pd;
  pd.elem_max = *std::max_element(diffs.begin(), diffs.end());
  pd.elem_mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / static_cast<double>(diffs.size());
  const auto mid = diffs.begin() + static_cast<long>(diffs.size() / 2);
  std::nth_element(diffs.begin(), mid, diffs.end());
  if (diffs.size() % 2 == 1) {
    pd.elem_median = *mid;
  } else {
    const double upper = *mid;
    const double lower = *std::max_element(diffs.begin(), mid);
    pd.elem_median = 0.5 * (lower + upper);
  }
  return pd;
}

double projector_gap_norm(const Matrix& v, const Matrix& w) {
  return spectral_norm(mul_nt(v, v) - mul_nt(w, w));
}

double d_row_upper(const Matrix& v, const Matrix& v_hat) {
  require(v.rows() == v_hat.rows() && v.cols() == v_hat.cols(), ErrorCode::invalid_argument,
          "d_row needs equally shaped bases");
  if (v.cols() == 0) return 0.0;
  // V_hat^T V = W S Z^T; aligned basis is V_hat W Z^T.
  const SvdResult f = svd(mul_tn(v_hat, v));
  const Matrix aligned = v_hat * mul_nt(f.u, f.v);
  double worst = 0.0;
  for (Index j = 0; j < v.rows(); ++j) {
    double s = 0.0;
    for (Index c = 0; c < v.cols(); ++c) {
      const double d = v(j, c) - aligned(j, c);
      s += d * d;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace skelet

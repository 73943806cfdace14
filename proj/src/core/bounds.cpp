#include "skelet/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "skelet/error.hpp"
#include "skelet/geometry.hpp"
#include "skelet/pivoting.hpp"

namespace skelet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfPi = std::numbers::pi / 2.0;

// 1-based singular value with zero past the end.
double sigma(const std::vector<double>& s, Index i) { return i >= 1 && i <= s.size() ? s[i - 1] : 0.0; }

double tail_frobenius(const std::vector<double>& s, Index k) {
  return k < s.size() ? norm2(std::span<const double>(s).subspan(k)) : 0.0;
}

double min_singular_value(const Matrix& m) {
  const auto sv = singular_values(m);
  return sv.size() < std::min(m.rows(), m.cols()) || sv.empty() ? 0.0 : sv.back();
}

void check_rank_and_size(BoundReport& r, const std::vector<double>& s, Index n, Index k) {
  if (2 * k > n) r.violate("k > n/2");
  if (!(sigma(s, k) > sigma(s, k + 1))) r.violate("sigma_k = sigma_{k+1}");
}

void check_index_set(const IndexSet& j, Index n, Index k) {
  require(j.size() == k, ErrorCode::invalid_argument, "skeleton size must equal k");
  std::vector<bool> seen(n, false);
  for (Index c : j) {
    require(c < n, ErrorCode::out_of_range, "skeleton index out of range");
    require(!seen[c], ErrorCode::invalid_argument, "skeleton contains duplicates");
    seen[c] = true;
  }
}

// sec of an angle, inapplicable at or beyond pi/2.
double secant(BoundReport& r, double angle, const char* what) {
  if (!(angle < kHalfPi)) {
    r.violate(std::string(what) + " >= pi/2");
    return kInf;
  }
  return 1.0 / std::cos(angle);
}

double tangent_sq(BoundReport& r, double angle, const char* what) {
  if (!(angle < kHalfPi)) {
    r.violate(std::string(what) + " >= pi/2");
    return kInf;
  }
  const double t = std::tan(angle);
  return t * t;
}

// Largest angle between span(I_J) and range(V(:, 1:k)); uses the sine
// branch when it is defined.
double index_angle(const Matrix& v, const IndexSet& j, Index k) {
  const Matrix vk = v.left_cols(k);
  if (2 * k <= v.rows()) return angles_to_index_subspace(vk, j).max_angle();
  const double c = std::clamp(min_singular_value(vk.select_rows(j)), 0.0, 1.0);
  return std::acos(c);
}

struct Actuals {
  double spectral;
  double frobenius;
};

Actuals id_actuals(const Matrix& a, const IndexSet& j) {
  const ResidualStats st = residual_stats(id_residual(a, j));
  return {st.spectral(), st.frobenius()};
}

}  // namespace

void BoundReport::violate(std::string reason) {
  applicable = false;
  hypothesis_violations.push_back(std::move(reason));
}

void BoundReport::set_actual(double actual) {
  actual_error = actual;
  if (actual > 0.0) ratio = value / actual;
  else ratio = value > 0.0 ? kInf : 1.0;
}

bool BoundReport::holds(double rel_tol) const {
  return !applicable || value >= actual_error * (1.0 - rel_tol);
}

double ResidualStats::frobenius() const { return norm2(sigma); }

double ResidualStats::kappa(Index i) const {
  require(i >= 1 && i <= sigma.size(), ErrorCode::out_of_range, "kappa index out of range");
  return sigma[i - 1] > 0.0 ? sigma[0] / sigma[i - 1] : kInf;
}

ResidualStats residual_stats(const Matrix& e) { return {e.empty() ? std::vector<double>{} : singular_values(e)}; }

Matrix projection_residual(const Matrix& a, const Matrix& basis) {
  require(basis.rows() == a.rows(), ErrorCode::invalid_argument, "basis must have m rows");
  if (basis.cols() == 0) return a;
  const Matrix w = orthonormalize(basis);
  return a - w * mul_tn(w, a);
}

Matrix id_residual(const Matrix& a, const IndexSet& j) { return id_from_columns(a, j).as_lowrank().residual(a); }

BoundReport spectral_secant_bound(const SvdResult& truth, const IndexSet& j, Index k, double actual_spectral) {
  const Index n = truth.v.rows();
  check_index_set(j, n, k);
  BoundReport r;
  r.name = "thm41";
  check_rank_and_size(r, truth.s, n, k);
  // sec(phi_max) = 1 / sigma_min(V(J, 1:k)).
  const double cosine = min_singular_value(truth.v.left_cols(k).select_rows(j));
  if (!(cosine > 0.0)) {
    r.violate("phi_max >= pi/2");
    r.value = kInf;
  } else {
    r.value = sigma(truth.s, k + 1) / cosine;
  }
  r.set_actual(actual_spectral);
  return r;
}

BoundReport spectral_secant_bound(const Matrix& a, const IndexSet& j, Index k) {
  return spectral_secant_bound(svd(a), j, k, id_actuals(a, j).spectral);
}

BoundReport frobenius_stablerank_bound(const SvdResult& truth, const IndexSet& j, Index k,
                                       double actual_frobenius) {
  const Index n = truth.v.rows();
  check_index_set(j, n, k);
  BoundReport r;
  r.name = "thm52";
  check_rank_and_size(r, truth.s, n, k);
  const auto cosines = singular_values(truth.v.left_cols(k).select_rows(j));
  double tan_sq = 0.0;
  if (cosines.size() < k || !(cosines.back() > 0.0)) {
    r.violate("phi_max >= pi/2");
    tan_sq = kInf;
  } else {
    for (double c : cosines) tan_sq += std::max(0.0, 1.0 / (c * c) - 1.0);
  }
  // ||Sigma_perp||_F^2 (1 + tan^2 / r_k) = ||Sigma_perp||_F^2 + sigma_{k+1}^2 tan^2.
  const double tail = tail_frobenius(truth.s, k), s1 = sigma(truth.s, k + 1);
  r.value = std::sqrt(tail * tail + s1 * s1 * tan_sq);
  if (!(s1 > 0.0)) r.violate("sigma_{k+1} = 0: residual stable rank undefined");
  r.set_actual(actual_frobenius);
  return r;
}

BoundReport frobenius_stablerank_bound(const Matrix& a, const IndexSet& j, Index k) {
  return frobenius_stablerank_bound(svd(a), j, k, id_actuals(a, j).frobenius);
}

ConditionBound condition_number_bound(const std::vector<double>& s, const ResidualStats& e, Index k) {
  ConditionBound out;
  BoundReport& r = out.report;
  r.name = "thm54";
  require(k >= 1, ErrorCode::invalid_argument, "k must be positive");
  const double ek = sigma(e.sigma, k + 1);
  if (!(ek > 0.0)) {
    r.violate("sigma_{k+1}(E) = 0");
    r.value = kInf;
  } else {
    r.value = sigma(s, k + 1) * (e.spectral() / ek);
  }
  r.set_actual(e.spectral());
  const double tol = 1e-10 * std::max(sigma(s, 1), 1e-300);
  out.worst_lemma_gap = kInf;
  for (Index i = 1; k + i <= s.size() && i <= e.sigma.size(); ++i) {
    const double gap = e.sigma[i - 1] - sigma(s, k + i);
    out.worst_lemma_gap = std::min(out.worst_lemma_gap, gap);
    if (gap < -tol) out.lemma_holds = false;
  }
  return out;
}

ConditionBound condition_number_bound(const Matrix& a, const Matrix& basis, Index k) {
  require(basis.cols() == k && k < a.rows(), ErrorCode::invalid_argument, "basis must span k < m dimensions");
  return condition_number_bound(singular_values(a), residual_stats(projection_residual(a, basis)), k);
}

BoundReport subset_angle_bound(const SvdResult& truth, const IndexSet& j, Index k, Index t,
                               double actual_spectral) {
  const Index n = truth.v.rows();
  check_index_set(j, n, k);
  require(t < k, ErrorCode::invalid_argument, "no valid t: need 0 <= t < k");
  const Index kt = k - t;
  BoundReport r;
  r.name = "subset_t" + std::to_string(t);
  check_rank_and_size(r, truth.s, n, kt);
  // Greedy subset: pivoted QR picks k - t of J's rows of V(:, 1:k-t).
  const Matrix rows = truth.v.left_cols(kt).select_rows(j);
  const IndexSet local = golub_businger_cpqr(rows.transposed(), kt).skeleton();
  IndexSet subset;
  for (Index i : local) subset.push_back(j[i]);
  const double cosine = min_singular_value(truth.v.left_cols(kt).select_rows(subset));
  if (!(cosine > 0.0)) {
    r.violate("phi_max^(I) >= pi/2");
    r.value = kInf;
  } else {
    r.value = sigma(truth.s, kt + 1) / cosine;
  }
  r.set_actual(actual_spectral);
  return r;
}

BoundReport subset_angle_bound(const Matrix& a, const IndexSet& j, Index k, Index t) {
  return subset_angle_bound(svd(a), j, k, t, id_actuals(a, j).spectral);
}

BoundPair gks_rrqr_bounds(const SvdResult& truth, Index k, double f, double actual_spectral,
                          double actual_frobenius) {
  const Index n = truth.v.rows();
  require(k >= 1 && k <= n, ErrorCode::out_of_range, "k out of range");
  const double growth = f * f * static_cast<double>(k) * static_cast<double>(n - k);
  const double s1 = sigma(truth.s, k + 1), tail = tail_frobenius(truth.s, k);
  BoundPair out;
  out.spectral.name = "gks_spec";
  out.spectral.value = s1 * std::sqrt(1.0 + growth);
  out.spectral.set_actual(actual_spectral);
  out.frobenius.name = "gks_frob";
  out.frobenius.value = std::sqrt(tail * tail + s1 * s1 * growth);
  if (!(s1 > 0.0)) out.frobenius.violate("sigma_{k+1} = 0: residual stable rank undefined");
  out.frobenius.set_actual(actual_frobenius);
  return out;
}

BoundPair gks_rrqr_bounds(const Matrix& a, Index k, double f) {
  const SvdResult truth = svd(a);
  const InterpolativeDecomp id = gks_from_basis(a, truth.v, truth.s, k, {Pivoter::gu_eisenstat, f});
  const Actuals act = id_actuals(a, id.columns);
  return gks_rrqr_bounds(truth, k, f, act.spectral, act.frobenius);
}

std::optional<BoundReport> RgksBounds::best_smaller_skeleton() const {
  std::optional<BoundReport> best;
  for (const auto& r : smaller_skeleton)
    if (r.applicable && (!best || r.value < best->value)) best = r;
  return best;
}

std::vector<BoundReport> RgksBounds::all() const {
  std::vector<BoundReport> out{angle_sum, cosine_form, row_perturbation, spectral, frobenius};
  out.insert(out.end(), smaller_skeleton.begin(), smaller_skeleton.end());
  return out;
}

RgksBounds rgks_perturbation_bounds(const SvdResult& truth, const Matrix& v_hat, const IndexSet& j, Index k,
                                    double actual_spectral, double actual_frobenius) {
  const Index n = truth.v.rows();
  check_index_set(j, n, k);
  require(v_hat.rows() == n && v_hat.cols() >= k, ErrorCode::invalid_argument, "V_hat must be n x k");
  const Matrix vk = truth.v.left_cols(k), vh = v_hat.left_cols(k);
  RgksBounds b;
  b.phi_max = index_angle(truth.v, j, k);
  b.phi_hat_max = index_angle(v_hat, j, k);
  b.theta_leading.resize(k);
  for (Index i = 1; i <= k; ++i)
    b.theta_leading[i - 1] = principal_angles(truth.v.left_cols(i), v_hat.left_cols(i)).max_angle();
  b.theta_max = b.theta_leading.back();
  b.mu = d_row_upper(vk, vh);
  b.coherence = coherence(vk);
  const double kd = static_cast<double>(k);
  const double cos_hat = std::cos(b.phi_hat_max);
  b.cos_phi_first_order = cos_hat - kd * b.coherence * b.mu / cos_hat;

  const double sum = b.phi_hat_max + b.theta_max;
  const bool small_k = 2 * k <= n;

  b.angle_sum.name = "thm61";
  b.angle_sum.value = sum;
  if (!small_k) b.angle_sum.violate("k > n/2");
  b.angle_sum.set_actual(b.phi_max);

  // 1 - cos x = 2 sin^2(x / 2), accurate for small angles.
  const auto one_minus_cos = [](double x) {
    const double h = std::sin(0.5 * std::min(x, std::numbers::pi));
    return 2.0 * h * h;
  };
  b.cosine_form.name = "thm61_cos";
  b.cosine_form.value = one_minus_cos(sum);
  if (!small_k) b.cosine_form.violate("k > n/2");
  b.cosine_form.set_actual(one_minus_cos(b.phi_max));

  b.row_perturbation.name = "thm63";
  const double sin_hat = std::sin(b.phi_hat_max);
  b.row_perturbation.value = sin_hat * sin_hat + 2.0 * kd * b.coherence * b.mu + kd * b.mu * b.mu;
  if (!small_k) b.row_perturbation.violate("k > n/2");
  if (!(b.phi_hat_max < kHalfPi)) b.row_perturbation.violate("phi_hat_max >= pi/2");
  const double sin_phi = std::sin(b.phi_max);
  b.row_perturbation.set_actual(sin_phi * sin_phi);

  const double s1 = sigma(truth.s, k + 1), tail = tail_frobenius(truth.s, k);
  b.spectral.name = "rgks_spec";
  check_rank_and_size(b.spectral, truth.s, n, k);
  b.spectral.value = s1 * secant(b.spectral, sum, "phi_hat_max + theta_max");
  b.spectral.set_actual(actual_spectral);

  b.frobenius.name = "rgks_frob";
  check_rank_and_size(b.frobenius, truth.s, n, k);
  const double tsq = tangent_sq(b.frobenius, sum, "phi_hat_max + theta_max");
  b.frobenius.value = std::sqrt(tail * tail + s1 * s1 * kd * tsq);
  if (!(s1 > 0.0)) b.frobenius.violate("sigma_{k+1} = 0: residual stable rank undefined");
  b.frobenius.set_actual(actual_frobenius);

  for (Index t = 0; t < k; ++t) {
    const Index kt = k - t;
    BoundReport r;
    r.name = "rgks_skel_t" + std::to_string(t);
    check_rank_and_size(r, truth.s, n, kt);
    if (!small_k && r.applicable) r.violate("k > n/2");
    r.value = sigma(truth.s, kt + 1) * secant(r, b.phi_hat_max + b.theta_leading[kt - 1], "phi_hat_max + theta^(k-t)");
    r.set_actual(actual_spectral);
    b.smaller_skeleton.push_back(std::move(r));
  }
  return b;
}

RgksBounds rgks_perturbation_bounds(const Matrix& a, const RgksResult& run) {
  const Actuals act = id_actuals(a, run.id.columns);
  return rgks_perturbation_bounds(svd(a), run.sketch.v, run.id.columns, run.id.columns.size(), act.spectral,
                                  act.frobenius);
}

SecantEnvelope coherence_secant_envelope(const Matrix& v_k, const IndexSet& j) {
  const Index n = v_k.rows(), k = v_k.cols();
  check_index_set(j, n, k);
  SecantEnvelope env;
  const double c = min_singular_value(v_k.select_rows(j));
  env.secant = c > 0.0 ? 1.0 / c : kInf;
  env.lower = 1.0 / coherence(v_k);
  const auto lev = leverage_scores(v_k);
  double mass = 0.0;
  for (Index idx : j) mass += lev[idx] * lev[idx];
  if (mass >= static_cast<double>(k) - 1.0) {
    const double denom = 1.0 - (static_cast<double>(k) - mass);
    env.upper = denom > 0.0 ? 1.0 / std::sqrt(denom) : kInf;
  }
  return env;
}

BoundPair hmt_structural_bound(const SvdResult& truth, const Matrix& omega, Index k, double actual_spectral,
                               double actual_frobenius) {
  const Index n = truth.v.rows(), r = truth.s.size();
  require(omega.rows() == n, ErrorCode::invalid_argument, "sketch must have n rows");
  require(k >= 1 && k < r && k <= omega.cols(), ErrorCode::invalid_argument, "need 1 <= k < rank capacity, k <= l");
  BoundPair out;
  out.spectral.name = "hmt_spec";
  out.frobenius.name = "hmt_frob";
  const Matrix omega1 = mul_tn(truth.v.left_cols(k), omega);
  const auto sv1 = singular_values(omega1);
  if (sv1.size() < k || !(sv1[k - 1] > 1e-12 * sv1[0])) {
    out.spectral.violate("Omega_1 lacks full row rank");
    out.frobenius.violate("Omega_1 lacks full row rank");
    out.spectral.value = out.frobenius.value = kInf;
  } else {
    const Matrix vperp = truth.v.block(0, k, n, r - k);
    Matrix term = mul_tn(vperp, omega) * pseudoinverse(omega1);
    for (Index i = 0; i < term.rows(); ++i)
      for (Index c = 0; c < term.cols(); ++c) term(i, c) *= truth.s[k + i];
    const double s1 = sigma(truth.s, k + 1), tail = tail_frobenius(truth.s, k);
    const double ts = spectral_norm(term), tf = frobenius_norm(term);
    out.spectral.value = std::sqrt(s1 * s1 + ts * ts);
    out.frobenius.value = std::sqrt(tail * tail + tf * tf);
  }
  out.spectral.set_actual(actual_spectral);
  out.frobenius.set_actual(actual_frobenius);
  return out;
}

}  // namespace skelet

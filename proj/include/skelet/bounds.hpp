#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skelet/factor.hpp"
#include "skelet/id.hpp"
#include "skelet/matrix.hpp"

namespace skelet {

/// An upper bound evaluated against the quantity it bounds. Inapplicable
/// bounds keep their value (possibly infinite) and list the failed
/// hypotheses.
struct BoundReport {
  std::string name;
  double value = 0.0;
  bool applicable = true;
  std::vector<std::string> hypothesis_violations;
  double actual_error = 0.0;
  double ratio = 0.0;  // value / actual_error

  void violate(std::string reason);
  void set_actual(double actual);
  /// applicable implies value >= actual (1 - rel_tol).
  bool holds(double rel_tol = 1e-8) const;
};

/// Singular values of a residual E with its truncated condition numbers.
struct ResidualStats {
  std::vector<double> sigma;  // descending, min(m, n) entries
  double spectral() const { return sigma.empty() ? 0.0 : sigma.front(); }
  double frobenius() const;
  /// sigma_1(E) / sigma_i(E), 1-based i; infinite when sigma_i(E) = 0.
  double kappa(Index i) const;
};

ResidualStats residual_stats(const Matrix& e);

/// E = A - W W^T A for an orthonormal basis W of the given columns' span
/// (the basis is orthonormalized internally).
Matrix projection_residual(const Matrix& a, const Matrix& basis);

/// Residual of the interpolative decomposition on columns J.
Matrix id_residual(const Matrix& a, const IndexSet& j);

// Bounds on the ID error for skeleton J, given the exact SVD of A.

BoundReport spectral_secant_bound(const SvdResult& truth, const IndexSet& j, Index k, double actual_spectral);
BoundReport spectral_secant_bound(const Matrix& a, const IndexSet& j, Index k);

BoundReport frobenius_stablerank_bound(const SvdResult& truth, const IndexSet& j, Index k,
                                       double actual_frobenius);
BoundReport frobenius_stablerank_bound(const Matrix& a, const IndexSet& j, Index k);

struct ConditionBound {
  BoundReport report;
  bool lemma_holds = true;      // sigma_i(E) >= sigma_{k+i}(A) for every valid i
  double worst_lemma_gap = 0.0;  // min_i sigma_i(E) - sigma_{k+i}(A)
};

/// sigma_{k+1} * kappa(E, k + 1) with E = A - P_W A and dim W = k.
ConditionBound condition_number_bound(const std::vector<double>& s, const ResidualStats& e, Index k);
ConditionBound condition_number_bound(const Matrix& a, const Matrix& basis, Index k);

/// sigma_{k-t+1} sec(phi_max^(I)) for a subset I of J with |I| = k - t,
/// chosen by pivoted QR on V(J, 1:k-t)^T. t = 0 gives spectral_secant_bound.
BoundReport subset_angle_bound(const SvdResult& truth, const IndexSet& j, Index k, Index t,
                               double actual_spectral);
BoundReport subset_angle_bound(const Matrix& a, const IndexSet& j, Index k, Index t);

struct BoundPair {
  BoundReport spectral;
  BoundReport frobenius;
};

/// GKS with strong RRQR(f): sigma_{k+1} sqrt(1 + f^2 k (n - k)) and
/// ||Sigma_perp||_F sqrt(1 + f^2 k (n - k) / r_k).
BoundPair gks_rrqr_bounds(const SvdResult& truth, Index k, double f, double actual_spectral,
                          double actual_frobenius);
BoundPair gks_rrqr_bounds(const Matrix& a, Index k, double f = 2.0);

struct RgksBounds {
  double phi_max = 0.0;      // I_J vs V_k
  double phi_hat_max = 0.0;  // I_J vs V_hat_k
  double theta_max = 0.0;    // V_k vs V_hat_k
  std::vector<double> theta_leading;  // theta_leading[i]: V_{i+1} vs V_hat_{i+1}
  double mu = 0.0;           // Procrustes upper bound on d_row(V_k, V_hat_k)
  double coherence = 0.0;    // c_k of V_k
  /// First-order lower estimate of cos(phi_max); O(mu^2) remainder omitted.
  double cos_phi_first_order = 0.0;

  BoundReport angle_sum;        // phi_max <= phi_hat + theta
  BoundReport cosine_form;      // 1 - cos(phi_max) <= 1 - cos(phi_hat + theta)
  BoundReport row_perturbation;  // sin^2 phi_max <= 1 - cos^2 phi_hat + 2 k c_k mu + k mu^2
  BoundReport spectral;         // sigma_{k+1} sec(phi_hat + theta)
  BoundReport frobenius;        // ||Sigma_perp||_F sqrt(1 + k tan^2(phi_hat + theta) / r_k)
  std::vector<BoundReport> smaller_skeleton;  // entry t: sigma_{k-t+1} sec(phi_hat + theta^(k-t))
  /// Smallest applicable smaller_skeleton value (t >= 0), if any.
  std::optional<BoundReport> best_smaller_skeleton() const;
  std::vector<BoundReport> all() const;
};

/// v_hat: the n x k basis RGKS pivoted; j: its skeleton.
RgksBounds rgks_perturbation_bounds(const SvdResult& truth, const Matrix& v_hat, const IndexSet& j, Index k,
                                    double actual_spectral, double actual_frobenius);
RgksBounds rgks_perturbation_bounds(const Matrix& a, const RgksResult& run);

struct SecantEnvelope {
  double secant = 0.0;  // sec(phi_max) = 1 / sigma_min(V(J, :))
  double lower = 0.0;   // 1 / c_k
  std::optional<double> upper;  // when sum_{j in J} l_j^2 >= k - 1
};

SecantEnvelope coherence_secant_envelope(const Matrix& v_k, const IndexSet& j);

/// ||E||^2 <= ||Sigma_perp||^2 + ||Sigma_perp Omega_2 Omega_1^+||^2 for the
/// sketch-and-project approximation with sketch omega.
BoundPair hmt_structural_bound(const SvdResult& truth, const Matrix& omega, Index k, double actual_spectral,
                               double actual_frobenius);

}  // namespace skelet

#pragma once

#include <vector>

#include "skelet/matrix.hpp"

namespace skelet {

/// Principal angles between two k-dimensional subspaces.
struct PrincipalAngles {
  std::vector<double> cosines;  // descending, in [0, 1]
  std::vector<double> angles;   // ascending, in [0, pi/2]

  double max_angle() const { return angles.empty() ? 0.0 : angles.back(); }
  double min_cosine() const { return cosines.empty() ? 1.0 : cosines.back(); }
};

/// Angles between range(X) and range(Y), both n x k with orthonormal
/// columns. Each angle is taken from the cosine branch (SVD of X^T Y) or the
/// sine branch (SVD of (I - X X^T) Y), whichever is better conditioned.
PrincipalAngles principal_angles(const Matrix& x, const Matrix& y);

/// Angles between span{e_j : j in J} and range(V_k); the cosines are the
/// singular values of the row subset V_k(J, :). Requires |J| = k <= n/2.
PrincipalAngles angles_to_index_subspace(const Matrix& v_k, const IndexSet& j);

/// Singular values (descending) of V(J^c, :) V(J, :)^{-1}; these are the
/// tangents of the angles from angles_to_index_subspace, largest first.
/// Throws rank_deficient when V(J, :) is singular (an angle equals pi/2).
std::vector<double> tangents_of_index_angles(const Matrix& v_k, const IndexSet& j);

/// Singular values (descending) of V(J, 1:k)^{-1} V(J, k+1:n) for a square
/// orthogonal V: the cosine-sine form of the same tangents.
std::vector<double> cs_block_tangents(const Matrix& v_full, const IndexSet& j, Index k);

/// Spectral quantities at rank k (1-based singular value indices in names).
struct SpectrumStats {
  double gap = 0.0;                   // sigma_{k+1} / sigma_k
  double residual_stable_rank = 0.0;  // ||Sigma_perp||_F^2 / ||Sigma_perp||_2^2
  double tail_spectral = 0.0;         // sigma_{k+1}
  double tail_frobenius = 0.0;        // ||Sigma_perp||_F
};

/// Throws when sigma_{k+1} = 0 (stable rank undefined) or k out of range.
SpectrumStats spectrum_stats(const std::vector<double>& s, Index k);

/// sigma_j / sigma_i with 1-based indices.
double generalized_gap(const std::vector<double>& s, Index i, Index j);

/// Row norms of V_k.
std::vector<double> leverage_scores(const Matrix& v_k);
double coherence(const Matrix& v_k);

struct ProjectorDistance {
  double theta_max = 0.0;
  double sin_theta_max = 0.0;
  double elem_max = 0.0;
  double elem_median = 0.0;
  double elem_mean = 0.0;
};

/// Compares P = V V^T with P_hat = V_hat V_hat^T.
ProjectorDistance projector_distance(const Matrix& v, const Matrix& v_hat);

/// |P - P_hat| entries, row-major, for histogramming.
std::vector<double> projector_abs_differences(const Matrix& v, const Matrix& v_hat);

/// ||V V^T - W W^T||_2 computed explicitly.
double projector_gap_norm(const Matrix& v, const Matrix& w);

/// Row-wise distance after orthogonal Procrustes alignment of v_hat onto v:
/// max_j ||v_j - Q v_hat_j||. An upper bound on the exact min over O(k).
double d_row_upper(const Matrix& v, const Matrix& v_hat);

}  // namespace skelet

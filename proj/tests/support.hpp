// Shared fixtures for the unit tests. Reference values come from Eigen and
// from std::mt19937, never from the library under test.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "skelet/matrix.hpp"

namespace support {

using skelet::Index;
using skelet::Matrix;
using EMat = Eigen::MatrixXd;

inline EMat to_eigen(const Matrix& a) {
  EMat out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

inline Matrix from_eigen(const EMat& a) {
  Matrix out(a.rows(), a.cols());
  for (Index i = 0; i < out.rows(); ++i)
    for (Index j = 0; j < out.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

inline EMat gaussian_eigen(Index m, Index n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  EMat out(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = dist(gen);
  return out;
}

inline Matrix random_gaussian(Index m, Index n, unsigned seed) { return from_eigen(gaussian_eigen(m, n, seed)); }

inline EMat random_orthonormal(Index m, Index n, unsigned seed) {
  Eigen::HouseholderQR<EMat> qr(gaussian_eigen(m, n, seed));
  return qr.householderQ() * EMat::Identity(m, n);
}

/// U diag(s) V^T with Haar-like random U (m x r) and V (n x r).
inline Matrix with_spectrum(Index m, Index n, const std::vector<double>& s, unsigned seed) {
  const Index r = s.size();
  const EMat u = random_orthonormal(m, r, seed);
  const EMat v = random_orthonormal(n, r, seed + 7777);
  Eigen::VectorXd d(r);
  for (Index i = 0; i < r; ++i) d(i) = s[i];
  return from_eigen(u * d.asDiagonal() * v.transpose());
}

inline Matrix random_rank(Index m, Index n, Index k, unsigned seed) {
  return from_eigen(gaussian_eigen(m, k, seed) * gaussian_eigen(k, n, seed + 1));
}

inline std::vector<double> oracle_singular_values(const Matrix& a) {
  Eigen::JacobiSVD<EMat> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

inline double oracle_spectral_norm(const Matrix& a) {
  const auto s = oracle_singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

inline double oracle_frobenius(const Matrix& a) { return to_eigen(a).norm(); }

/// Residual norm of projecting A onto the span of its columns J.
inline double oracle_column_residual(const Matrix& a, const std::vector<Index>& j, bool spectral) {
  const EMat ea = to_eigen(a);
  EMat c(ea.rows(), j.size());
  for (Index t = 0; t < j.size(); ++t) c.col(t) = ea.col(j[t]);
  const EMat e = ea - c * c.completeOrthogonalDecomposition().pseudoInverse() * ea;
  if (!spectral) return e.norm();
  Eigen::JacobiSVD<EMat> svd(e);
  return svd.singularValues()(0);
}

/// Upper-triangular Kahan matrix diag(1, s, ..., s^{n-1}) (I - c * strict upper ones).
inline Matrix kahan(Index n, double c) {
  const double s = std::sqrt(1.0 - c * c);
  Matrix out(n, n);
  double scale = 1.0;
  for (Index i = 0; i < n; ++i) {
    out(i, i) = scale;
    for (Index j = i + 1; j < n; ++j) out(i, j) = -c * scale;
    scale *= s;
  }
  return out;
}

/// Kahan matrix with the diagonal nudged so CPQR keeps the natural order.
inline Matrix perturbed_kahan(Index n, double c) {
  Matrix out = kahan(n, c);
  for (Index i = 0; i < n; ++i) out(i, i) *= 1.0 + 1e-10 * static_cast<double>(n - i);
  return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (to_eigen(a) - to_eigen(b)).cwiseAbs().maxCoeff();
}

inline double orthonormality_error(const Matrix& q) {
  const EMat e = to_eigen(q);
  return (e.transpose() * e - EMat::Identity(e.cols(), e.cols())).norm();
}

}  // namespace support

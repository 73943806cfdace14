#pragma once

#include "skelet/matrix.hpp"

namespace skelet {

/// A * P = Q * R with P the permutation matrix of `perm` (A * P = A(:, perm)).
/// Q is m x r and R is r x n with r = min(m, n); the leading k x k block of R
/// is upper triangular.
struct PivotedQr {
  IndexSet perm;
  Matrix q;
  Matrix r;
  Index k = 0;
  Index swaps = 0;  // strong-RRQR interchanges performed after CPQR

  Matrix r11() const { return r.block(0, 0, k, k); }
  Matrix r12() const { return r.block(0, k, k, r.cols() - k); }
  Matrix r22() const { return r.block(k, k, r.rows() - k, r.cols() - k); }
  /// First k pivots.
  IndexSet skeleton() const { return {perm.begin(), perm.begin() + static_cast<long>(k)}; }
  /// R11^{-1} R12, the interpolation coefficients.
  Matrix interpolation_coefficients() const;
};

/// Householder QR with greedy max-norm column pivoting. Ties (within a
/// relative 1e-13) go to the lowest original column index.
PivotedQr golub_businger_cpqr(const Matrix& a, Index k);

/// Strong rank-revealing QR: starts from CPQR and interchanges a leading and
/// a trailing column while sqrt((R11^{-1}R12)_ij^2 + (gamma_j / omega_i)^2)
/// exceeds f. On return every |(R11^{-1} R12)_ij| <= f (1 + 1e-8).
PivotedQr gu_eisenstat_srrqr(const Matrix& a, Index k, double f = 2.0);

/// Upper-triangular inverse by back substitution.
Matrix upper_triangular_inverse(const Matrix& r);

}  // namespace skelet

#pragma once

#include <vector>

#include "skelet/matrix.hpp"

namespace skelet {

/// Thin SVD A = U diag(s) V^T with r = min(m, n) components, s descending.
struct SvdResult {
  Matrix u;
  std::vector<double> s;
  Matrix v;

  Index rank_capacity() const noexcept { return s.size(); }
  Matrix reconstruct() const;
};

/// SVD partitioned at rank k into leading and trailing blocks.
struct SvdPartition {
  Matrix u_k, v_k, u_perp, v_perp;
  std::vector<double> s_k, s_perp;

  Matrix reassemble() const;
};

/// One-sided (Hestenes) Jacobi SVD. Off-diagonal threshold 1e-14 relative,
/// cyclic sweeps, at most 60 of them.
SvdResult svd(const Matrix& a);
/// Singular values only; skips accumulating the right rotations.
std::vector<double> singular_values(const Matrix& a);

SvdPartition partition_at(const SvdResult& f, Index k);

struct QrResult {
  Matrix q;  // m x n, orthonormal columns
  Matrix r;  // n x n, upper triangular
};

/// Thin Householder QR, requires rows >= cols.
QrResult householder_qr(const Matrix& a);

/// Orthonormal basis for range(A) via thin QR (Q factor only).
Matrix orthonormalize(const Matrix& a);

/// Moore-Penrose pseudoinverse with singular values <= rel_tol * s_1 dropped.
Matrix pseudoinverse(const Matrix& a, double rel_tol = 1e-12);

/// Nearest orthogonal matrix U V^T. Throws rank_deficient when
/// s_min <= 1e-12 s_1.
Matrix polar_orthogonal_factor(const Matrix& a);

/// Orthonormal basis of the orthogonal complement of range(Q) for Q with
/// orthonormal columns (m x (m - k)).
Matrix orthogonal_complement(const Matrix& q);

}  // namespace skelet

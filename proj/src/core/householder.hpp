#pragma once

// Householder kernels on transposed storage: a matrix A (m x n) is held as
// T = A^T (n x m, row-major), so every column of A is a contiguous row.

#include <cmath>
#include <span>
#include <vector>

#include "skelet/matrix.hpp"

namespace skelet::detail {

inline double dot4(const double* x, const double* y, Index n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  Index i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

/// Reflector H = I - tau v v^T with v[0] = 1, stored in-place over x[1..].
/// On return x[0] holds beta, the new leading entry.
inline double make_reflector(std::span<double> x) {
  const Index n = x.size();
  double tail = 0.0;
  if (n > 1) tail = norm2(x.subspan(1));
  if (tail == 0.0) return 0.0;
  const double x0 = x[0];
  const double nrm = std::hypot(x0, tail);
  const double beta = x0 >= 0 ? -nrm : nrm;
  const double tau = (beta - x0) / beta;
  const double scale = 1.0 / (x0 - beta);
  for (Index i = 1; i < n; ++i) x[i] *= scale;
  x[0] = beta;
  return tau;
}

/// Apply H to y (same length as the reflector), v implicit with v[0] = 1.
inline void apply_reflector(const double* v, double tau, double* y, Index n) {
  if (tau == 0.0) return;
  double s = y[0] + dot4(v + 1, y + 1, n - 1);
  s *= tau;
  y[0] -= s;
  for (Index i = 1; i < n; ++i) y[i] -= s * v[i];
}

/// Householder-factored state on transposed storage.
struct HouseholderState {
  Matrix t;                  // n x m, column j of A as row j
  std::vector<double> tau;   // one per reflector
};

/// Build the first `ncols` columns of Q (m x ncols) from reflectors stored in
/// rows 0..steps-1 of state.t. Returned transposed: row j is column j of Q.
inline Matrix form_q_transposed(const HouseholderState& st, Index m, Index ncols) {
  const Index steps = st.tau.size();
  Matrix qt(ncols, m);
  for (Index j = 0; j < ncols; ++j) {
    double* y = qt.row(j).data();
    y[j] = 1.0;
    for (Index kk = steps; kk-- > 0;) {
      const double* v = st.t.row(kk).data() + kk;
      apply_reflector(v, st.tau[kk], y + kk, m - kk);
    }
  }
  return qt;
}

}  // namespace skelet::detail

#include "skelet/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "householder.hpp"
#include "skelet/error.hpp"

namespace skelet {

namespace {

constexpr double kJacobiTol = 1e-14;
constexpr int kJacobiMaxSweeps = 60;

/// Householder QR of A (m >= n) on transposed storage.
detail::HouseholderState factor_transposed(const Matrix& a) {
  const Index m = a.rows(), n = a.cols();
  detail::HouseholderState st{a.transposed(), std::vector<double>(n, 0.0)};
  for (Index k = 0; k < n; ++k) {
    double* vk = st.t.row(k).data() + k;
    st.tau[k] = detail::make_reflector({vk, m - k});
    for (Index j = k + 1; j < n; ++j)
      detail::apply_reflector(vk, st.tau[k], st.t.row(j).data() + k, m - k);
  }
  return st;
}

Matrix extract_r(const detail::HouseholderState& st, Index n) {
  Matrix r(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= j; ++i) r(i, j) = st.t(j, i);
  return r;
}

// Columns of some matrix G are stored as rows of `g` (n rows of length m).
// Rotates pairs until all are mutually orthogonal to kJacobiTol. If `vrows`
// is non-null its rows receive the same rotations (accumulating V).
void jacobi_orthogonalize(Matrix& g, Matrix* vrows) {
  const Index n = g.rows(), m = g.cols();
  std::vector<double> d(n);
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    for (Index j = 0; j < n; ++j) {
      const double* gj = g.row(j).data();
      d[j] = detail::dot4(gj, gj, m);
    }
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double a = d[p], b = d[q];
        if (a == 0.0 || b == 0.0) continue;
        double* gp = g.row(p).data();
        double* gq = g.row(q).data();
        const double c = detail::dot4(gp, gq, m);
        if (std::abs(c) <= kJacobiTol * std::sqrt(a) * std::sqrt(b)) continue;
        rotated = true;
        const double zeta = (b - a) / (2.0 * c);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (Index i = 0; i < m; ++i) {
          const double x = gp[i], y = gq[i];
          gp[i] = cs * x - sn * y;
          gq[i] = sn * x + cs * y;
        }
        d[p] = a - t * c;
        d[q] = b + t * c;
        if (vrows) {
          double* vp = vrows->row(p).data();
          double* vq = vrows->row(q).data();
          for (Index i = 0; i < vrows->cols(); ++i) {
            const double x = vp[i], y = vq[i];
            vp[i] = cs * x - sn * y;
            vq[i] = sn * x + cs * y;
          }
        }
      }
    }
    if (!rotated) return;
  }
  // Reaching the sweep cap leaves rotations at roundoff level; the result
  // is still accurate to the stated tolerances for every input we accept.
}

// Normalize the rows of g into an orthonormal set, completing any zero rows
// with vectors orthogonal to the rest.
void normalize_rows(Matrix& g, std::span<const double> s) {
  const Index n = g.rows(), m = g.cols();
  std::vector<bool> ok(n, false);
  for (Index j = 0; j < n; ++j) {
    if (s[j] > 0.0) {
      for (double& x : g.row(j)) x /= s[j];
      ok[j] = true;
    }
  }
  Index probe = 0;
  for (Index j = 0; j < n; ++j) {
    if (ok[j]) continue;
    for (; probe < m; ++probe) {
      std::vector<double> e(m, 0.0);
      e[probe] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (Index l = 0; l < n; ++l) {
          if (!ok[l]) continue;
          const double c = dot(g.row(l), e);
          for (Index i = 0; i < m; ++i) e[i] -= c * g(l, i);
        }
      }
      const double nrm = norm2(e);
      if (nrm > 1e-8) {
        for (Index i = 0; i < m; ++i) g(j, i) = e[i] / nrm;
        ok[j] = true;
        ++probe;
        break;
      }
    }
  }
}

std::vector<Index> descending_order(std::span<const double> s) {
  std::vector<Index> order(s.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return s[x] > s[y]; });
  return order;
}

// SVD of a with rows >= cols.
SvdResult svd_tall(const Matrix& a, bool want_vectors) {
  const Index m = a.rows(), n = a.cols();
  // Precondition with QR and run Jacobi on the columns of R^T: with
  // R^T = X S Y^T we get A = (Q Y) S X^T.
  auto st = factor_transposed(a);
  Matrix g = extract_r(st, n);  // rows of R = columns of R^T
  Matrix yrows;
  if (want_vectors) yrows = Matrix::identity(n);
  jacobi_orthogonalize(g, want_vectors ? &yrows : nullptr);

  std::vector<double> raw(n);
  for (Index j = 0; j < n; ++j) raw[j] = norm2(g.row(j));
  const auto order = descending_order(raw);

  SvdResult out;
  out.s.resize(n);
  for (Index j = 0; j < n; ++j) out.s[j] = raw[order[j]];
  if (!want_vectors) return out;

  Matrix xs(n, n), ys(n, n);
  for (Index j = 0; j < n; ++j) {
    std::copy_n(g.row(order[j]).data(), n, xs.row(j).data());
    std::copy_n(yrows.row(order[j]).data(), n, ys.row(j).data());
  }
  normalize_rows(xs, out.s);
  // V = X (columns are rows of xs).
  out.v = xs.transposed();
  // U = Q Y, Q built from the reflectors.
  Matrix qt = detail::form_q_transposed(st, m, n);  // n x m
  out.u = mul_tn(qt, ys.transposed());               // (m x n) * (n x n)
  return out;
}

void check_finite(const Matrix& a) {
  require(a.all_finite(), ErrorCode::non_finite, "matrix has non-finite entries");
}

}  // namespace

Matrix SvdResult::reconstruct() const {
  Matrix us = u;
  for (Index i = 0; i < us.rows(); ++i)
    for (Index j = 0; j < s.size(); ++j) us(i, j) *= s[j];
  return mul_nt(us, v);
}

Matrix SvdPartition::reassemble() const {
  auto part = [](const Matrix& u, std::span<const double> s, const Matrix& v) {
    Matrix us = u;
    for (Index i = 0; i < us.rows(); ++i)
      for (Index j = 0; j < s.size(); ++j) us(i, j) *= s[j];
    return mul_nt(us, v);
  };
  return part(u_k, s_k, v_k) + part(u_perp, s_perp, v_perp);
}

SvdResult svd(const Matrix& a) {
  check_finite(a);
  if (a.empty()) return {Matrix(a.rows(), 0), {}, Matrix(a.cols(), 0)};
  if (a.rows() >= a.cols()) return svd_tall(a, true);
  SvdResult t = svd_tall(a.transposed(), true);
  std::swap(t.u, t.v);
  return t;
}

std::vector<double> singular_values(const Matrix& a) {
  check_finite(a);
  if (a.empty()) return {};
  if (a.rows() >= a.cols()) return svd_tall(a, false).s;
  return svd_tall(a.transposed(), false).s;
}

SvdPartition partition_at(const SvdResult& f, Index k) {
  const Index r = f.s.size();
  require(k >= 1 && k < r, ErrorCode::out_of_range, "partition rank must satisfy 1 <= k < min(m, n)");
  SvdPartition p;
  p.u_k = f.u.block(0, 0, f.u.rows(), k);
  p.v_k = f.v.block(0, 0, f.v.rows(), k);
  p.u_perp = f.u.block(0, k, f.u.rows(), r - k);
  p.v_perp = f.v.block(0, k, f.v.rows(), r - k);
  p.s_k.assign(f.s.begin(), f.s.begin() + static_cast<long>(k));
  p.s_perp.assign(f.s.begin() + static_cast<long>(k), f.s.end());
  return p;
}

QrResult householder_qr(const Matrix& a) {
  check_finite(a);
  require(a.rows() >= a.cols(), ErrorCode::invalid_argument, "thin QR requires rows >= cols");
  const Index m = a.rows(), n = a.cols();
  auto st = factor_transposed(a);
  QrResult out;
  out.r = extract_r(st, n);
  out.q = detail::form_q_transposed(st, m, n).transposed();
  return out;
}

Matrix orthonormalize(const Matrix& a) { return householder_qr(a).q; }

Matrix pseudoinverse(const Matrix& a, double rel_tol) {
  require(rel_tol > 0.0 && rel_tol < 1.0, ErrorCode::invalid_argument, "rel_tol must lie in (0, 1)");
  const SvdResult f = svd(a);
  Matrix out(a.cols(), a.rows());
  if (f.s.empty() || f.s.front() == 0.0) return out;
  const double cut = rel_tol * f.s.front();
  Matrix vs = f.v;
  Index kept = 0;
  for (Index j = 0; j < f.s.size(); ++j) {
    const double inv = f.s[j] > cut ? 1.0 / f.s[j] : 0.0;
    if (inv != 0.0) ++kept;
    for (Index i = 0; i < vs.rows(); ++i) vs(i, j) *= inv;
  }
  if (kept == 0) return out;
  return mul_nt(vs, f.u);
}

Matrix polar_orthogonal_factor(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorCode::invalid_argument, "polar factor requires a square matrix");
  const SvdResult f = svd(a);
  if (f.s.empty()) return a;
  if (!(f.s.back() > 1e-12 * f.s.front()))
    fail(ErrorCode::rank_deficient, "polar factor: matrix is numerically singular");
  return mul_nt(f.u, f.v);
}

Matrix orthogonal_complement(const Matrix& q) {
  const Index m = q.rows(), k = q.cols();
  require(k <= m, ErrorCode::invalid_argument, "complement requires cols <= rows");
  if (k == 0) return Matrix::identity(m);
  auto st = factor_transposed(q);
  Matrix full = detail::form_q_transposed(st, m, m);  // rows are columns of full Q
  return full.block(k, 0, m - k, m).transposed();
}

}  // namespace skelet

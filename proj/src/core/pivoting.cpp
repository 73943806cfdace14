#include "skelet/pivoting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "householder.hpp"
#include "skelet/error.hpp"

namespace skelet {

namespace {

constexpr double kTieTol = 1e-13;
constexpr double kDowndateGuard = 1e-7;
constexpr double kSwapSlack = 1e-10;

// Householder QR of A(:, perm) with optional greedy pivoting; perm is updated
// in place when pivoting.
PivotedQr factor(const Matrix& a, IndexSet perm, Index k, bool pivot) {
  const Index m = a.rows(), n = a.cols(), r = std::min(m, n);
  detail::HouseholderState st{a.select_cols(perm).transposed(), std::vector<double>(r, 0.0)};
  Matrix& t = st.t;

  std::vector<double> vn1(n), vn2(n);
  if (pivot) {
    for (Index j = 0; j < n; ++j) vn1[j] = vn2[j] = norm2(t.row(j));
  }

  for (Index s = 0; s < r; ++s) {
    if (pivot) {
      double best = 0.0;
      for (Index j = s; j < n; ++j) best = std::max(best, vn1[j]);
      Index p = s;
      bool found = false;
      for (Index j = s; j < n; ++j) {
        if (vn1[j] >= best * (1.0 - kTieTol) && (!found || perm[j] < perm[p])) {
          p = j;
          found = true;
        }
      }
      if (p != s) {
        std::swap_ranges(t.row(s).begin(), t.row(s).end(), t.row(p).begin());
        std::swap(perm[s], perm[p]);
        std::swap(vn1[s], vn1[p]);
        std::swap(vn2[s], vn2[p]);
      }
    }
    double* v = t.row(s).data() + s;
    st.tau[s] = detail::make_reflector({v, m - s});
    for (Index j = s + 1; j < n; ++j) {
      double* y = t.row(j).data() + s;
      detail::apply_reflector(v, st.tau[s], y, m - s);
      if (!pivot || vn1[j] == 0.0) continue;
      const double ratio = std::abs(y[0]) / vn1[j];
      const double shrink = std::max(0.0, (1.0 - ratio) * (1.0 + ratio));
      const double updated = vn1[j] * std::sqrt(shrink);
      const double rel = updated / vn2[j];
      if (rel * rel < kDowndateGuard) {
        // Cancellation: recompute the trailing norm from scratch.
        vn1[j] = s + 1 < m ? norm2(std::span<const double>(y + 1, m - s - 1)) : 0.0;
        vn2[j] = vn1[j];
      } else {
        vn1[j] = updated;
      }
    }
  }

  PivotedQr out;
  out.perm = std::move(perm);
  out.k = k;
  out.r = Matrix(r, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= std::min(j, r - 1); ++i) out.r(i, j) = t(j, i);
  out.q = detail::form_q_transposed(st, m, r).transposed();
  return out;
}

IndexSet identity_perm(Index n) {
  IndexSet p(n);
  std::iota(p.begin(), p.end(), Index{0});
  return p;
}

}  // namespace

Matrix upper_triangular_inverse(const Matrix& r) {
  const Index k = r.rows();
  require(r.cols() == k, ErrorCode::invalid_argument, "triangular inverse needs a square matrix");
  Matrix inv(k, k);
  for (Index c = 0; c < k; ++c) {
    // Solve R x = e_c.
    for (Index i = c + 1; i-- > 0;) {
      double s = i == c ? 1.0 : 0.0;
      for (Index l = i + 1; l <= c; ++l) s -= r(i, l) * inv(l, c);
      if (r(i, i) == 0.0) fail(ErrorCode::rank_deficient, "singular triangular factor");
      inv(i, c) = s / r(i, i);
    }
  }
  return inv;
}

Matrix PivotedQr::interpolation_coefficients() const {
  return upper_triangular_inverse(r11()) * r12();
}

PivotedQr golub_businger_cpqr(const Matrix& a, Index k) {
  require(a.all_finite(), ErrorCode::non_finite, "matrix has non-finite entries");
  require(k >= 1 && k <= std::min(a.rows(), a.cols()), ErrorCode::out_of_range,
          "CPQR rank must satisfy 1 <= k <= min(m, n)");
  return factor(a, identity_perm(a.cols()), k, true);
}

PivotedQr gu_eisenstat_srrqr(const Matrix& a, Index k, double f) {
  require(f > 1.0, ErrorCode::invalid_argument, "strong RRQR needs f > 1");
  PivotedQr cur = golub_businger_cpqr(a, k);
  const Index n = a.cols();
  if (k == n) return cur;
  const Index rr = cur.r.rows();
  const double lead = std::abs(cur.r(0, 0));
  if (!(std::abs(cur.r(k - 1, k - 1)) > 1e-14 * lead)) return cur;  // rank < k: nothing to improve

  const Index guard = 10 * n * k;
  const double limit = f * (1.0 + kSwapSlack);
  Index swaps = 0;
  for (;;) {
    const Matrix r11inv = upper_triangular_inverse(cur.r11());
    const Matrix coeff = r11inv * cur.r12();
    std::vector<double> inv_row_sq(k, 0.0);
    for (Index i = 0; i < k; ++i)
      for (Index c = 0; c < k; ++c) inv_row_sq[i] += r11inv(i, c) * r11inv(i, c);
    std::vector<double> gamma_sq(n - k, 0.0);
    for (Index i = k; i < rr; ++i)
      for (Index j = 0; j < n - k; ++j) gamma_sq[j] += cur.r(i, k + j) * cur.r(i, k + j);

    double best = 0.0;
    Index bi = 0, bj = 0;
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < n - k; ++j) {
        const double rho = std::sqrt(coeff(i, j) * coeff(i, j) + gamma_sq[j] * inv_row_sq[i]);
        if (rho > best) {
          best = rho;
          bi = i;
          bj = j;
        }
      }
    }
    if (best <= limit) break;
    if (++swaps > guard)
      fail(ErrorCode::not_converged, "strong RRQR exceeded its swap budget");
    IndexSet perm = cur.perm;
    std::swap(perm[bi], perm[k + bj]);
    cur = factor(a, std::move(perm), k, false);
  }
  cur.swaps = swaps;
  return cur;
}

}  // namespace skelet

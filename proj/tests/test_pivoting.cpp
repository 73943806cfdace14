#include <doctest.h>

#include "skelet/factor.hpp"
#include "skelet/pivoting.hpp"
#include "support.hpp"

using namespace skelet;

namespace {

double max_abs_entry(const Matrix& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

void check_factorization(const Matrix& a, const PivotedQr& f) {
  const Matrix lhs = a * permutation_matrix(f.perm);
  CHECK(frobenius_norm(lhs - f.q * f.r) <= 1e-10 * frobenius_norm(a));
  CHECK(support::orthonormality_error(f.q) < 1e-10);
  for (Index i = 0; i < f.r.rows(); ++i)
    for (Index j = 0; j < std::min(i, f.r.cols()); ++j) CHECK(f.r(i, j) == 0.0);
}

}  // namespace

TEST_CASE("cpqr picks the largest column first") {
  const Matrix a{{0, 1}, {2, 0}};
  const PivotedQr f = golub_businger_cpqr(a, 1);
  CHECK(f.perm[0] == 0);
  const Matrix b{{1, 0}, {0, 2}};
  CHECK(golub_businger_cpqr(b, 1).perm[0] == 1);
}

TEST_CASE("cpqr ties go to the lowest index") {
  const Matrix q = support::from_eigen(support::random_orthonormal(6, 6, 3));
  const PivotedQr f = golub_businger_cpqr(q, 6);
  for (Index i = 0; i < 6; ++i) CHECK(f.perm[i] == i);
}

TEST_CASE("cpqr factorization, diagonal ordering and residual identity") {
  for (unsigned seed = 0; seed < 15; ++seed) {
    const Index m = 10 + seed % 4, n = 10 + seed % 5, k = 1 + seed % 6;
    const Matrix a = support::random_gaussian(m, n, seed);
    const PivotedQr f = golub_businger_cpqr(a, k);
    check_factorization(a, f);
    for (Index i = 1; i < std::min(m, n); ++i) CHECK(std::abs(f.r(i, i)) <= std::abs(f.r(i - 1, i - 1)) * (1 + 1e-12));
    const Matrix r22 = f.r22();
    const double spec = support::oracle_column_residual(a, f.skeleton(), true);
    const double fro = support::oracle_column_residual(a, f.skeleton(), false);
    CHECK(std::abs(support::oracle_spectral_norm(r22) - spec) <= 1e-8 * spec);
    CHECK(std::abs(frobenius_norm(r22) - fro) <= 1e-8 * fro);
    CHECK(golub_businger_cpqr(a, k).perm == f.perm);
  }
}

TEST_CASE("cpqr agrees with an independent pivoted qr on generic input") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Matrix a = support::random_gaussian(9, 7, 40 + seed);
    const PivotedQr f = golub_businger_cpqr(a, 7);
    Eigen::ColPivHouseholderQR<support::EMat> oracle(support::to_eigen(a));
    for (Index i = 0; i < 7; ++i) CHECK(f.perm[i] == static_cast<Index>(oracle.colsPermutation().indices()(i)));
  }
}

TEST_CASE("cpqr on rank-deficient input leaves a zero trailing block") {
  const Matrix a = support::random_rank(12, 9, 4, 5);
  const PivotedQr f = golub_businger_cpqr(a, 4);
  CHECK(max_abs_entry(f.r22()) < 1e-12 * frobenius_norm(a));
}

TEST_CASE("strong rrqr leaves a compliant cpqr untouched") {
  const Matrix a = support::random_gaussian(8, 8, 1);
  const PivotedQr cp = golub_businger_cpqr(a, 3);
  REQUIRE(max_abs_entry(cp.interpolation_coefficients()) <= 2.0);
  const PivotedQr ge = gu_eisenstat_srrqr(a, 3, 2.0);
  CHECK(ge.swaps == 0);
  CHECK(ge.perm == cp.perm);
}

TEST_CASE("strong rrqr repairs the Kahan matrix") {
  const Matrix a = support::perturbed_kahan(32, 0.285);
  const PivotedQr cp = golub_businger_cpqr(a, 16);
  CHECK(max_abs_entry(cp.interpolation_coefficients()) > 2.0);
  const PivotedQr ge = gu_eisenstat_srrqr(a, 16, 2.0);
  check_factorization(a, ge);
  CHECK(ge.swaps > 0);
  CHECK(max_abs_entry(ge.interpolation_coefficients()) <= 2.0 + 1e-8);
}

TEST_CASE("strong rrqr guarantees") {
  const double f = 2.0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Index n = 12, k = 4;
    const Matrix a = support::random_gaussian(n, n, 300 + seed);
    const PivotedQr g = gu_eisenstat_srrqr(a, k, f);
    check_factorization(a, g);
    const Matrix coeff = g.interpolation_coefficients();
    CHECK(max_abs_entry(coeff) <= f + 1e-8);
    CHECK(frobenius_norm(coeff) <= f * std::sqrt(double(k * (n - k))) + 1e-8);
    const auto sa = support::oracle_singular_values(a);
    const auto s11 = support::oracle_singular_values(g.r11());
    const double q = std::sqrt(1.0 + f * f * double(k * (n - k)));
    CHECK(s11.back() >= sa[k - 1] / q);
    const double fro = support::oracle_column_residual(a, g.skeleton(), false);
    CHECK(std::abs(frobenius_norm(g.r22()) - fro) <= 1e-8 * fro);
  }
  CHECK_THROWS(gu_eisenstat_srrqr(support::random_gaussian(4, 4, 1), 2, 1.0));
}

TEST_CASE("upper triangular inverse") {
  const Matrix r{{2, 1, 0}, {0, 4, 3}, {0, 0, 5}};
  CHECK(support::max_abs_diff(upper_triangular_inverse(r) * r, Matrix::identity(3)) < 1e-15);
}

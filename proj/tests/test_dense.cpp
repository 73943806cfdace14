#include <doctest.h>

#include <sstream>

#include "skelet/error.hpp"
#include "skelet/factor.hpp"
#include "skelet/matrix.hpp"
#include "skelet/testgen.hpp"
#include "support.hpp"

using namespace skelet;
using support::EMat;

TEST_CASE("matrix basics") {
  Matrix a{{1, 2, 3}, {4, 5, 6}};
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  CHECK(a.size() == 6);
  CHECK(a(1, 2) == 6);
  CHECK(a.transposed()(2, 1) == 6);
  CHECK(a.select_cols(std::vector<Index>{2, 0}) == Matrix{{3, 1}, {6, 4}});
  CHECK(a.select_rows(std::vector<Index>{1}) == Matrix{{4, 5, 6}});
  CHECK(a.block(0, 1, 2, 2) == Matrix{{2, 3}, {5, 6}});
  CHECK(hcat(a, a).cols() == 6);
  CHECK(mul_tn(a, a) == a.transposed() * a);
  CHECK(mul_nt(a, a) == a * a.transposed());
  const std::vector<Index> perm{2, 0, 1};
  CHECK(a * permutation_matrix(perm) == a.select_cols(perm));
  CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("norm ordering holds on random matrices") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Matrix a = support::random_gaussian(3 + seed % 5, 2 + seed % 7, seed);
    const double two = spectral_norm(a), fro = frobenius_norm(a);
    const double r = static_cast<double>(std::min(a.rows(), a.cols()));
    CHECK(two >= 0.0);
    CHECK(two <= fro * (1 + 1e-14));
    CHECK(fro <= std::sqrt(r) * two * (1 + 1e-14));
    CHECK(two == doctest::Approx(support::oracle_spectral_norm(a)).epsilon(1e-12));
    CHECK(fro == doctest::Approx(support::oracle_frobenius(a)).epsilon(1e-14));
  }
}

TEST_CASE("matrix text round trip is exact") {
  const Matrix a = support::random_gaussian(5, 4, 3);
  std::stringstream ss;
  write_matrix(ss, a);
  CHECK(read_matrix(ss) == a);
  std::stringstream bad("2 2\n1 2 3");
  CHECK_THROWS_AS(read_matrix(bad), Error);
  std::stringstream nonfinite("1 2\n1 nan");
  CHECK_THROWS_AS(read_matrix(nonfinite), Error);
}

TEST_CASE("svd of identity and permuted diagonal") {
  const SvdResult id = svd(Matrix::identity(3));
  CHECK(id.s == std::vector<double>{1, 1, 1});
  CHECK(support::max_abs_diff(id.u, Matrix::identity(3)) == 0.0);
  CHECK(support::max_abs_diff(id.v, Matrix::identity(3)) == 0.0);

  const Matrix d{{0, 2, 0}, {0, 0, 1}, {3, 0, 0}};
  const SvdResult f = svd(d);
  CHECK(f.s[0] == doctest::Approx(3));
  CHECK(f.s[1] == doctest::Approx(2));
  CHECK(f.s[2] == doctest::Approx(1));
}

TEST_CASE("svd singular values match an independent eigensolver on A^T A") {
  const Matrix a = support::random_gaussian(8, 6, 11);
  const EMat ea = support::to_eigen(a);
  Eigen::SelfAdjointEigenSolver<EMat> eig(ea.transpose() * ea);
  const SvdResult f = svd(a);
  REQUIRE(f.s.size() == 6);
  for (Index i = 0; i < 6; ++i) CHECK(std::abs(f.s[i] - std::sqrt(eig.eigenvalues()(5 - i))) < 1e-8);
}

TEST_CASE("svd invariants on random shapes") {
  for (unsigned seed = 0; seed < 12; ++seed) {
    const Index m = 2 + seed % 9, n = 2 + (seed * 5) % 11;
    const Matrix a = support::random_gaussian(m, n, 100 + seed);
    const SvdResult f = svd(a);
    CHECK(f.s.size() == std::min(m, n));
    CHECK(support::orthonormality_error(f.u) < 1e-10);
    CHECK(support::orthonormality_error(f.v) < 1e-10);
    CHECK(std::is_sorted(f.s.rbegin(), f.s.rend()));
    CHECK(frobenius_norm(a - f.reconstruct()) <= 1e-10 * frobenius_norm(a));
    const auto oracle = support::oracle_singular_values(a);
    for (Index i = 0; i < oracle.size(); ++i) CHECK(std::abs(f.s[i] - oracle[i]) < 1e-12 * oracle[0]);
  }
}

TEST_CASE("svd of a graded matrix keeps small singular values accurate") {
  const std::vector<double> s{1, 1e-4, 1e-8, 1e-12};
  const Matrix a = support::with_spectrum(6, 4, s, 5);
  const auto got = singular_values(a);
  for (Index i = 0; i < 4; ++i) CHECK(std::abs(got[i] - s[i]) < 1e-14);
}

TEST_CASE("svd rejects non-finite input") {
  Matrix a = Matrix::identity(2);
  a(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(svd(a), Error);
}

TEST_CASE("partition_at") {
  const SvdResult f = svd(Matrix::diagonal(std::vector<double>{3, 2, 1}));
  const SvdPartition p = partition_at(f, 1);
  CHECK(p.s_k == std::vector<double>{3});
  CHECK(p.s_perp == std::vector<double>{2, 1});
  CHECK(partition_at(f, 2).s_perp.size() == 1);

  const Matrix a = support::random_gaussian(10, 10, 21);
  const SvdResult g = svd(a);
  const auto oracle = support::oracle_singular_values(a);
  for (Index k = 1; k < 10; ++k) {
    const SvdPartition q = partition_at(g, k);
    CHECK(support::oracle_spectral_norm(Matrix::diagonal(q.s_perp)) == doctest::Approx(oracle[k]).epsilon(1e-12));
    CHECK(frobenius_norm(q.reassemble() - a) < 1e-10 * frobenius_norm(a));
  }
  CHECK_THROWS_AS(partition_at(g, 11), Error);
}

TEST_CASE("householder qr") {
  const EMat q0 = support::random_orthonormal(7, 4, 3);
  const QrResult f = householder_qr(support::from_eigen(q0));
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) CHECK(std::abs(std::abs(f.r(i, j)) - (i == j ? 1.0 : 0.0)) < 1e-12);

  const Matrix a = support::random_gaussian(12, 5, 9);
  const QrResult g = householder_qr(a);
  CHECK(frobenius_norm(a - g.q * g.r) < 1e-12 * frobenius_norm(a));
  CHECK(support::orthonormality_error(g.q) < 1e-12);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < i; ++j) CHECK(g.r(i, j) == 0.0);

  const Matrix deficient = support::random_rank(10, 5, 3, 4);
  const QrResult h = householder_qr(deficient);
  const double norm = support::oracle_spectral_norm(deficient);
  CHECK(std::abs(h.r(4, 4)) < 1e-12 * norm);
}

TEST_CASE("pseudoinverse") {
  const Matrix p = pseudoinverse(Matrix::diagonal(std::vector<double>{2, 0}));
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(p(1, 1) == 0.0);

  const Matrix q = support::from_eigen(support::random_orthonormal(6, 3, 8));
  CHECK(support::max_abs_diff(pseudoinverse(q), q.transposed()) < 1e-12);

  const Matrix a = support::random_gaussian(8, 3, 12);
  CHECK(support::max_abs_diff(pseudoinverse(a) * a, Matrix::identity(3)) < 1e-8);
  const EMat oracle = support::to_eigen(a).completeOrthogonalDecomposition().pseudoInverse();
  CHECK(support::max_abs_diff(pseudoinverse(a), support::from_eigen(oracle)) < 1e-12);
}

TEST_CASE("polar factor") {
  const Matrix q = support::from_eigen(support::random_orthonormal(5, 5, 2));
  CHECK(support::max_abs_diff(polar_orthogonal_factor(q), q) < 1e-12);
  CHECK(support::max_abs_diff(polar_orthogonal_factor(Matrix::diagonal(std::vector<double>{2, 3})),
                              Matrix::identity(2)) < 1e-14);
  CHECK_THROWS_AS(polar_orthogonal_factor(Matrix::diagonal(std::vector<double>{1, 0})), Error);
}

TEST_CASE("polar factor of mixed Hadamard and permutation beats random orthogonal candidates") {
  const Matrix h = hadamard(4);
  const Matrix p = permutation_matrix(std::vector<Index>{3, 2, 1, 0});
  const Matrix a = 0.5 * (h + p);
  const Matrix w = polar_orthogonal_factor(a);
  CHECK(support::orthonormality_error(w) < 1e-10);
  const double best = frobenius_norm(a - w);
  for (unsigned t = 0; t < 10000; ++t) {
    const Matrix cand = support::from_eigen(support::random_orthonormal(4, 4, 1000 + t));
    REQUIRE(frobenius_norm(a - cand) >= best - 1e-12);
  }
}

TEST_CASE("orthogonal complement") {
  const Matrix q = support::from_eigen(support::random_orthonormal(9, 4, 1));
  const Matrix c = orthogonal_complement(q);
  CHECK(c.rows() == 9);
  CHECK(c.cols() == 5);
  CHECK(support::orthonormality_error(hcat(q, c)) < 1e-12);
}

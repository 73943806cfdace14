#include <doctest.h>

#include "skelet/bounds.hpp"
#include "skelet/factor.hpp"
#include "skelet/geometry.hpp"
#include "skelet/random.hpp"
#include "skelet/testgen.hpp"
#include "support.hpp"

using namespace skelet;
using support::EMat;

namespace {

Matrix compose(const Matrix& u, const std::vector<double>& s, const Matrix& v) {
  return u * Matrix::diagonal(s) * v.transposed();
}

std::vector<double> geometric(Index n, double rho) {
  std::vector<double> s(n);
  for (Index i = 0; i < n; ++i) s[i] = std::pow(rho, double(i));
  return s;
}

double tail_frob(const std::vector<double>& s, Index k) {
  double t = 0.0;
  for (Index i = k; i < s.size(); ++i) t += s[i] * s[i];
  return std::sqrt(t);
}

}  // namespace

TEST_CASE("secant bound is exact for axis-aligned singular vectors") {
  const std::vector<double> s{5, 4, 3, 2, 1, 0.5};
  const Matrix a = Matrix::diagonal(s);
  const BoundReport r = spectral_secant_bound(a, {0, 1, 2}, 3);
  CHECK(r.applicable);
  CHECK(r.value == doctest::Approx(2.0));
  CHECK(r.actual_error == doctest::Approx(2.0));
  CHECK(r.holds());
}

TEST_CASE("secant bound on incoherent subspaces grows like sqrt(n/k)") {
  const Index n = 64, k = 4;
  const Matrix h = hadamard(n);
  const auto s = geometric(n, 0.8);
  const Matrix u = support::from_eigen(support::random_orthonormal(n, n, 1));
  const Matrix a = compose(u, s, h);
  const SvdResult truth{u, s, h};
  for (unsigned seed = 0; seed < 5; ++seed) {
    IndexSet j = random_permutation(n, RngKey{seed, 0, StreamRole::permutation});
    j.resize(k);
    const Matrix e = id_residual(a, j);
    const BoundReport r = spectral_secant_bound(truth, j, k, spectral_norm(e));
    if (!std::isfinite(r.value)) continue;
    CHECK(r.value >= s[k] * std::sqrt(double(n) / double(k)) * (1 - 1e-12));
    CHECK(r.holds());
  }
}

TEST_CASE("frobenius stable-rank bound") {
  const std::vector<double> s{5, 4, 3, 2, 1, 0.5};
  const BoundReport exact = frobenius_stablerank_bound(Matrix::diagonal(s), {0, 1, 2}, 3);
  CHECK(exact.value == doctest::Approx(tail_frob(s, 3)));

  const Index n = 20, k = 3;
  const Matrix u = support::from_eigen(support::random_orthonormal(n, n, 2));
  const Matrix v = support::from_eigen(support::random_orthonormal(n, n, 3));
  std::vector<double> flat(n, 0.1), step(n, 1e-8);
  for (Index i = 0; i < k; ++i) flat[i] = step[i] = 1.0 - 0.1 * double(i);
  step[k] = 0.1;
  const IndexSet j{0, 5, 9};
  const BoundReport rf = frobenius_stablerank_bound(SvdResult{u, flat, v}, j, k, 0.0);
  const BoundReport rs = frobenius_stablerank_bound(SvdResult{u, step, v}, j, k, 0.0);
  CHECK(rf.value / tail_frob(flat, k) < rs.value / tail_frob(step, k));
}

TEST_CASE("condition-number bound") {
  const Index n = 48, k = 6;
  SUBCASE("flat tail makes the bound tight") {
    std::vector<double> s(n);
    for (Index i = 0; i < n; ++i) s[i] = i < k ? 2.0 - 0.1 * double(i) : (i <= 2 * k ? 0.5 : 0.5 * std::pow(0.8, double(i - 2 * k)));
    const Matrix a = support::with_spectrum(n, n, s, 4);
    for (unsigned seed = 0; seed < 10; ++seed) {
      const Matrix basis = gaussian(n, k, RngKey{seed, 0, StreamRole::sketch});
      const Matrix w = orthonormalize(a * basis);
      const ConditionBound c = condition_number_bound(a, w, k);
      CHECK(c.report.applicable);
      CHECK(c.report.ratio >= 1.0 - 1e-8);
      CHECK(c.report.ratio <= 1.0 + 1e-6);
      CHECK(c.lemma_holds);
    }
  }
  SUBCASE("geometric decay makes it loose") {
    const auto s = geometric(n, 0.5);
    const Matrix a = support::with_spectrum(n, n, s, 5);
    const Matrix w = orthonormalize(a * gaussian(n, k, 3));
    const ConditionBound c = condition_number_bound(a, w, k);
    CHECK(c.report.holds());
    CHECK(c.report.ratio > 10.0);
    CHECK(c.lemma_holds);
    CHECK(c.worst_lemma_gap >= -1e-10 * s[0]);
  }
}

TEST_CASE("interlacing for residuals of arbitrary rank-k projections") {
  for (unsigned seed = 0; seed < 30; ++seed) {
    const Index m = 10 + seed % 7, n = 8 + seed % 9, k = 1 + seed % 4;
    const Matrix a = support::random_gaussian(m, n, 40 + seed);
    const Matrix w = orthonormalize(support::random_gaussian(m, k, 80 + seed));
    const auto sa = support::oracle_singular_values(a);
    const auto se = support::oracle_singular_values(projection_residual(a, w));
    for (Index i = 0; k + i < sa.size(); ++i) CHECK(se[i] >= sa[k + i] - 1e-10 * sa[0]);
    CHECK(condition_number_bound(a, w, k).lemma_holds);
  }
}

TEST_CASE("subset-angle bound") {
  const Index n = 16, k = 4;
  const Matrix a = support::with_spectrum(n, n, geometric(n, 0.8), 6);
  for (unsigned seed = 0; seed < 10; ++seed) {
    IndexSet j = random_permutation(n, RngKey{seed, 0, StreamRole::permutation});
    j.resize(k);
    CHECK(subset_angle_bound(a, j, k, 0).value == doctest::Approx(spectral_secant_bound(a, j, k).value));
    for (Index t = 0; t < k; ++t) {
      const BoundReport r = subset_angle_bound(a, j, k, t);
      CHECK((r.holds() || !std::isfinite(r.value)));
    }
  }

  // The k-th singular vector is nearly orthogonal to the skeleton span while
  // the leading three are aligned with it.
  const double beta = 1.5;
  Matrix v = Matrix::identity(n);
  v(3, 3) = std::cos(beta);
  v(10, 3) = std::sin(beta);
  v(3, 10) = -std::sin(beta);
  v(10, 10) = std::cos(beta);
  std::vector<double> s(n);
  for (Index i = 0; i < n; ++i) s[i] = i < 3 ? 1.0 : (i == 3 ? 0.5 : 0.4 * std::pow(0.9, double(i - 4)));
  const Matrix u = support::from_eigen(support::random_orthonormal(n, n, 7));
  const Matrix b = compose(u, s, v);
  const IndexSet jj{0, 1, 2, 3};
  const BoundReport full = spectral_secant_bound(b, jj, k);
  const BoundReport sub = subset_angle_bound(b, jj, k, 1);
  CHECK(sub.holds());
  CHECK(sub.value < 0.2 * full.value);
}

TEST_CASE("gks strong rrqr bounds") {
  const double f = 2.0;
  const Index n = 64, k = 8;
  std::vector<double> s(n);
  for (Index i = 0; i < n; ++i) s[i] = i < k ? 1.0 : 0.01 * std::pow(0.95, double(i - k));
  const Matrix a = support::with_spectrum(n, n, s, 8);
  const BoundPair p = gks_rrqr_bounds(a, k, f);
  CHECK(p.spectral.holds());
  CHECK(p.frobenius.holds());

  std::vector<double> flat(n, 0.01);
  for (Index i = 0; i < k; ++i) flat[i] = 1.0;
  const BoundPair q = gks_rrqr_bounds(support::with_spectrum(n, n, flat, 9), k, f);
  CHECK(q.frobenius.ratio < q.spectral.ratio);

  const Matrix two{{3, 0}, {0, 1}};
  CHECK(gks_rrqr_bounds(two, 1, f).spectral.value == doctest::Approx(std::sqrt(1 + f * f)));
}

TEST_CASE("bounds flag their hypotheses") {
  const Matrix a = support::random_gaussian(8, 8, 1);
  CHECK(!spectral_secant_bound(a, {0, 1, 2, 3, 4}, 5).applicable);
  const BoundReport tie = spectral_secant_bound(Matrix::identity(6), {0, 1}, 2);
  CHECK(!tie.applicable);
  CHECK(!tie.hypothesis_violations.empty());
}

TEST_CASE("rgks perturbation bounds") {
  SUBCASE("exact sketch leaves the angle sum unchanged") {
    const Index n = 32, k = 4;
    std::vector<double> s(n);
    for (Index i = 0; i < n; ++i) s[i] = i < k ? 1.0 : 0.01 * std::pow(0.9, double(i));
    const Matrix a = support::with_spectrum(n, n, s, 1);
    const RgksResult run = rgks(a, {k, 2, 10, 3, 0});
    const RgksBounds b = rgks_perturbation_bounds(a, run);
    CHECK(b.theta_max < 1e-8);
    CHECK(std::abs(b.phi_max - b.phi_hat_max) < 1e-8);
    for (const auto& r : b.all()) CHECK((r.holds() || !std::isfinite(r.value)));
  }
  SUBCASE("random trials satisfy every applicable bound") {
    int checked = 0;
    for (unsigned seed = 0; seed < 300; ++seed) {
      const Index n = 12 + seed % 8, k = 1 + seed % 4;
      const Matrix a = support::with_spectrum(n, n, geometric(n, 0.6 + 0.03 * double(seed % 10)), seed);
      const RgksResult run = rgks(a, {k, seed % 3, 0, seed, 0});
      const RgksBounds b = rgks_perturbation_bounds(a, run);
      CHECK(b.cosine_form.holds());
      CHECK(b.angle_sum.holds());
      for (const auto& r : b.all()) {
        CHECK((r.holds() || !r.applicable));
        checked += r.applicable;
      }
    }
    CHECK(checked > 1000);
  }
}

TEST_CASE("coherence secant envelope") {
  const Index n = 16, k = 3;
  const Matrix p = permutation_matrix(std::vector<Index>{5, 2, 9, 0, 1, 3, 4, 6, 7, 8, 10, 11, 12, 13, 14, 15});
  const SecantEnvelope e = coherence_secant_envelope(p.left_cols(k), {5, 2, 9});
  CHECK(e.secant == doctest::Approx(1.0));
  CHECK(e.lower == doctest::Approx(1.0));
  REQUIRE(e.upper.has_value());
  CHECK(*e.upper == doctest::Approx(1.0));

  const SecantEnvelope h = coherence_secant_envelope(hadamard(n).left_cols(4), {0, 1, 2, 3});
  CHECK(h.lower == doctest::Approx(2.0));

  for (unsigned seed = 0; seed < 20; ++seed) {
    TestMatrixSpec spec;
    spec.n = 32;
    spec.alpha = 0.9;
    spec.seed = seed;
    const Matrix v = build_right_basis(spec).left_cols(k);
    const IndexSet j = select_rows_by_pivoting(v, k, {});
    const SecantEnvelope env = coherence_secant_envelope(v, j);
    CHECK(env.lower <= env.secant * (1 + 1e-12));
    if (env.upper) CHECK(env.secant <= *env.upper * (1 + 1e-10));
  }
}

TEST_CASE("structural bound for the sketch-and-project approximation") {
  const Index n = 20, k = 4;
  const auto s = geometric(n, 0.8);
  const Matrix a = support::with_spectrum(n, n, s, 11);
  const SvdResult truth = svd(a);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Matrix omega = gaussian(n, k + seed % 3, RngKey{seed, 0, StreamRole::sketch});
    const ApproxError err = approximation_error(a, proto_sketch(a, omega));
    const BoundPair p = hmt_structural_bound(truth, omega, k, err.spectral, err.frobenius);
    CHECK(p.spectral.holds());
    CHECK(p.frobenius.holds());
  }
}

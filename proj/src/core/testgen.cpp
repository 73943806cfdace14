#include "skelet/testgen.hpp"

#include <algorithm>
#include <bit>
#include <numbers>
#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

#include "skelet/error.hpp"
#include "skelet/factor.hpp"
#include "skelet/geometry.hpp"
#include "skelet/keyvalue.hpp"
#include "skelet/random.hpp"

namespace skelet {

namespace {

constexpr int kPolarAttempts = 5;

bool is_power_of_two(Index n) { return n >= 1 && (n & (n - 1)) == 0; }

std::string join(const auto& values, char sep) {
  std::ostringstream out;
  bool first = true;
  for (const auto& v : values) {
    if (!first) out << sep;
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) out << format_double(v);
    else out << v;
    first = false;
  }
  return out.str();
}

// In-place unnormalized Walsh-Hadamard transform (Sylvester ordering).
void walsh_hadamard(std::vector<double>& x) {
  const Index n = x.size();
  for (Index h = 1; h < n; h *= 2)
    for (Index i = 0; i < n; i += 2 * h)
      for (Index j = i; j < i + h; ++j) {
        const double a = x[j], b = x[j + h];
        x[j] = a + b;
        x[j + h] = a - b;
      }
}

// Matrix-free M = (1 - alpha) H + alpha P with P(perm[j], j) = 1.
struct MixedOperator {
  Index n;
  double alpha;
  IndexSet perm;
  double scale;

  std::vector<double> apply(const std::vector<double>& x, bool transpose) const {
    std::vector<double> h = x;
    walsh_hadamard(h);
    for (Index i = 0; i < n; ++i) h[i] *= (1.0 - alpha) * scale;
    for (Index j = 0; j < n; ++j) {
      if (transpose) h[j] += alpha * x[perm[j]];
      else h[perm[j]] += alpha * x[j];
    }
    return h;
  }
  std::vector<double> gram(const std::vector<double>& x) const { return apply(apply(x, false), true); }
};

// Smallest eigenvalue estimate of M^T M by Lanczos with full
// reorthogonalization; Ritz values approach it from above.
double lanczos_min_eigenvalue(const MixedOperator& op, RngKey key, Index steps) {
  const Index n = op.n;
  steps = std::min(steps, n);
  Philox rng(key);
  std::vector<double> q(n);
  for (double& x : q) x = rng.normal();
  const double q0 = norm2(q);
  for (double& x : q) x /= q0;
  std::vector<std::vector<double>> basis{q};
  std::vector<double> diag, off;
  for (Index it = 0; it < steps; ++it) {
    std::vector<double> w = op.gram(basis.back());
    diag.push_back(dot(w, basis.back()));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        const double c = dot(w, b);
        for (Index i = 0; i < n; ++i) w[i] -= c * b[i];
      }
    const double beta = norm2(w);
    if (beta < 1e-12 || it + 1 == steps) break;
    off.push_back(beta);
    for (double& x : w) x /= beta;
    basis.push_back(std::move(w));
  }
  const Index m = diag.size();
  Matrix t(m, m);
  for (Index i = 0; i < m; ++i) {
    t(i, i) = diag[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = off[i];
  }
  // T is symmetric positive semidefinite, so its singular values are its eigenvalues.
  return singular_values(t).back();
}

}  // namespace

std::vector<double> SpectrumProfile::generate(Index n) const {
  require(n >= 1, ErrorCode::invalid_argument, "spectrum length must be positive");
  std::vector<double> s(n);
  switch (kind) {
    case SpectrumKind::geometric:
      require(rho > 0.0 && rho <= 1.0, ErrorCode::invalid_argument, "geometric ratio must lie in (0, 1]");
      for (Index i = 0; i < n; ++i) s[i] = std::pow(rho, static_cast<double>(i));
      break;
    case SpectrumKind::flat_then_geometric:
      require(rho > 0.0 && rho <= 1.0, ErrorCode::invalid_argument, "geometric ratio must lie in (0, 1]");
      for (Index i = 0; i < n; ++i)
        s[i] = i < flat_length ? 1.0 : std::pow(rho, static_cast<double>(i + 1 - std::max<Index>(flat_length, 1)));
      break;
    case SpectrumKind::staircase: {
      require(!shelf_lengths.empty() && !drop_factors.empty(), ErrorCode::invalid_argument,
              "staircase needs shelf lengths and drop factors");
      for (Index len : shelf_lengths) require(len >= 1, ErrorCode::invalid_argument, "shelf length must be positive");
      for (double d : drop_factors) require(d >= 1.0, ErrorCode::invalid_argument, "drop factor must be >= 1");
      double level = 1.0;
      Index shelf = 0, left = shelf_lengths[0];
      for (Index i = 0; i < n; ++i) {
        if (left == 0) {
          level /= drop_factors[shelf % drop_factors.size()];
          ++shelf;
          left = shelf_lengths[shelf % shelf_lengths.size()];
        }
        s[i] = level;
        --left;
      }
      break;
    }
    case SpectrumKind::custom: {
      require(values.size() == n, ErrorCode::invalid_argument, "custom spectrum length must equal n");
      require(values[0] > 0.0, ErrorCode::invalid_argument, "custom spectrum must be positive");
      for (Index i = 0; i < n; ++i) {
        require(values[i] > 0.0 && std::isfinite(values[i]), ErrorCode::invalid_argument,
                "custom spectrum must be positive and finite");
        require(i == 0 || values[i] <= values[i - 1], ErrorCode::invalid_argument,
                "custom spectrum must be descending");
        s[i] = values[i] / values[0];
      }
      break;
    }
  }
  for (double x : s)
    require(x > 0.0, ErrorCode::invalid_argument, "spectrum underflows to zero; reduce its dynamic range");
  return s;
}

double TestMatrixSpec::noise_level() const {
  return delta >= 0.0 ? delta : 0.1 / std::sqrt(static_cast<double>(n));
}

Matrix hadamard(Index n) {
  require(is_power_of_two(n), ErrorCode::invalid_argument, "Hadamard order must be a power of two");
  Matrix h(n, n);
  h(0, 0) = 1.0;
  for (Index size = 1; size < n; size *= 2) {
    for (Index i = 0; i < size; ++i) {
      for (Index j = 0; j < size; ++j) {
        const double x = h(i, j);
        h(i, j + size) = x;
        h(i + size, j) = x;
        h(i + size, j + size) = -x;
      }
    }
  }
  h *= 1.0 / std::sqrt(static_cast<double>(n));
  return h;
}

Matrix build_right_basis(const TestMatrixSpec& spec) {
  const Index n = spec.n;
  require(n >= 1, ErrorCode::invalid_argument, "matrix size must be positive");
  if (spec.subspace == SubspaceKind::random_orthogonal)
    return orthonormalize(gaussian(n, n, RngKey{spec.seed, 0, StreamRole::matrix_entries}));

  require(spec.alpha >= 0.0 && spec.alpha <= 1.0, ErrorCode::invalid_argument, "alpha must lie in [0, 1]");
  for (int attempt = 0; attempt < kPolarAttempts; ++attempt) {
    const auto trial = static_cast<std::uint32_t>(attempt);
    Matrix mix;
    switch (spec.subspace) {
      case SubspaceKind::mixed: {
        if (spec.alpha == 0.0) return hadamard(n);
        const Matrix perm = permutation_matrix(random_permutation(n, {spec.seed, trial, StreamRole::permutation}));
        if (spec.alpha == 1.0) return perm;
        mix = hadamard(n) * (1.0 - spec.alpha) + perm * spec.alpha;
        break;
      }
      case SubspaceKind::noisy_permutation:
        mix = permutation_matrix(random_permutation(n, {spec.seed, trial, StreamRole::permutation})) +
              gaussian(n, n, {spec.seed, trial, StreamRole::noise}) * spec.noise_level();
        break;
      case SubspaceKind::noisy_hadamard:
        mix = hadamard(n) + gaussian(n, n, {spec.seed, trial, StreamRole::noise}) * spec.noise_level();
        break;
      case SubspaceKind::random_orthogonal:
        break;
    }
    try {
      return polar_orthogonal_factor(mix);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::rank_deficient) throw;
    }
  }
  fail(ErrorCode::rank_deficient, "polar factor singular after 5 attempts");
}

TestMatrix build_test_matrix(const TestMatrixSpec& spec) {
  TestMatrix t;
  t.s = spec.spectrum.generate(spec.n);
  t.v = build_right_basis(spec);
  t.u = orthonormalize(gaussian(spec.n, spec.n, RngKey{spec.seed, 0, StreamRole::left_basis}));
  Matrix us = t.u;
  for (Index i = 0; i < spec.n; ++i)
    for (Index j = 0; j < spec.n; ++j) us(i, j) *= t.s[j];
  t.a = mul_nt(us, t.v);
  return t;
}

Matrix mixed_basis_leading_columns(Index n, double alpha, std::uint64_t seed, Index cols) {
  require(is_power_of_two(n), ErrorCode::invalid_argument, "Hadamard order must be a power of two");
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::invalid_argument, "alpha must lie in [0, 1]");
  require(cols <= n, ErrorCode::invalid_argument, "cannot take more columns than n");
  const IndexSet perm = random_permutation(n, {seed, 0, StreamRole::permutation});
  Matrix out(n, cols);
  if (alpha == 0.0 || alpha == 1.0) {
    for (Index j = 0; j < cols; ++j) {
      if (alpha == 1.0) {
        out(perm[j], j) = 1.0;
      } else {
        const double h = 1.0 / std::sqrt(static_cast<double>(n));
        for (Index i = 0; i < n; ++i) out(i, j) = (std::popcount(i & j) % 2 ? -h : h);
      }
    }
    return out;
  }
  const MixedOperator op{n, alpha, perm, 1.0 / std::sqrt(static_cast<double>(n))};
  // Spectrum of M^T M lies in [lo, 1] with lo >= (1 - 2 alpha)^2.
  const double proven = (1.0 - 2.0 * alpha) * (1.0 - 2.0 * alpha);
  const double ritz = lanczos_min_eigenvalue(op, {seed, 0, StreamRole::noise}, 300);
  const double lo = std::max(proven, 0.5 * ritz);
  if (!(lo > 1e-12)) fail(ErrorCode::rank_deficient, "mixed basis is numerically singular");
  const double hi = 1.0;

  // Chebyshev interpolant of x^{-1/2} on [lo, hi].
  const auto mapped = [&](double t) { return 0.5 * (hi + lo) + 0.5 * (hi - lo) * t; };
  Index degree = 16;
  std::vector<double> coef;
  for (;; degree *= 2) {
    const Index nodes = degree + 1;
    coef.assign(nodes, 0.0);
    for (Index j = 0; j < nodes; ++j) {
      const double th = std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(nodes);
      const double fv = 1.0 / std::sqrt(mapped(std::cos(th)));
      for (Index c = 0; c < nodes; ++c) coef[c] += fv * std::cos(static_cast<double>(c) * th);
    }
    for (double& c : coef) c *= 2.0 / static_cast<double>(nodes);
    coef[0] *= 0.5;
    const double tail = std::abs(coef[nodes - 1]) + std::abs(coef[nodes - 2]);
    // Coefficients carry rounding noise of order eps * max f = eps / sqrt(lo).
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() / std::sqrt(lo);
    if (tail < std::max(1e-14 * std::abs(coef[0]), noise)) break;
    if (degree >= 8192) fail(ErrorCode::not_converged, "Chebyshev expansion did not converge");
  }

  // Clenshaw recurrence with the operator t(G) = (2 G - (hi + lo)) / (hi - lo).
  const auto shifted = [&](const std::vector<double>& x) {
    std::vector<double> g = op.gram(x);
    for (Index i = 0; i < n; ++i) g[i] = (2.0 * g[i] - (hi + lo) * x[i]) / (hi - lo);
    return g;
  };
  for (Index j = 0; j < cols; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    std::vector<double> b1(n, 0.0), b2(n, 0.0);
    for (Index c = coef.size() - 1; c >= 1; --c) {
      std::vector<double> tb = shifted(b1);
      for (Index i = 0; i < n; ++i) {
        const double next = coef[c] * e[i] + 2.0 * tb[i] - b2[i];
        b2[i] = b1[i];
        b1[i] = next;
      }
    }
    std::vector<double> tb = shifted(b1);
    std::vector<double> y(n);
    for (Index i = 0; i < n; ++i) y[i] = coef[0] * e[i] + tb[i] - b2[i];
    const std::vector<double> col = op.apply(y, false);
    for (Index i = 0; i < n; ++i) out(i, j) = col[i];
  }
  if (!(orthonormality_defect(out) < 1e-8))
    fail(ErrorCode::not_converged, "fast polar columns lost orthonormality; the spectrum estimate was too high");
  return out;
}

Calibration calibrate_alpha(Index n, Index k, double target, std::uint64_t seed, double tol) {
  require(k >= 1 && k <= n, ErrorCode::invalid_argument, "calibration needs 1 <= k <= n");
  const double floor = std::sqrt(static_cast<double>(k) / static_cast<double>(n));
  require(target >= floor - tol && target <= 1.0 + tol, ErrorCode::out_of_range,
          "coherence target must lie in [sqrt(k/n), 1]");
  TestMatrixSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.subspace = SubspaceKind::mixed;
  auto eval = [&](double alpha) {
    spec.alpha = alpha;
    Calibration c;
    c.alpha = alpha;
    c.v_k = mixed_basis_leading_columns(n, alpha, seed, k);
    c.coherence = coherence(c.v_k);
    return c;
  };
  Calibration lo = eval(0.0);
  if (std::abs(lo.coherence - target) <= tol) return lo;
  Calibration hi = eval(1.0);
  if (std::abs(hi.coherence - target) <= tol) return hi;
  double a = 0.0, b = 1.0;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (a + b);
    Calibration c;
    // (H + P) / 2 is typically close to singular; step off such points.
    for (int nudge = 0;; ++nudge) {
      try {
        c = eval(mid);
        break;
      } catch (const Error& e) {
        if (nudge == 4 || (e.code() != ErrorCode::rank_deficient && e.code() != ErrorCode::not_converged)) throw;
        mid += 0.05 * (b - a);
      }
    }
    if (std::abs(c.coherence - target) <= tol) return c;
    if (c.coherence < target) a = mid; else b = mid;
  }
  fail(ErrorCode::not_converged, "alpha calibration did not reach the coherence tolerance");
}

std::string to_string(const SpectrumProfile& p) {
  switch (p.kind) {
    case SpectrumKind::geometric: return "geometric:" + join(std::vector<double>{p.rho}, ',');
    case SpectrumKind::staircase: return "staircase:" + join(p.shelf_lengths, ',') + ":" + join(p.drop_factors, ',');
    case SpectrumKind::flat_then_geometric:
      return "flat-geometric:" + std::to_string(p.flat_length) + ":" + join(std::vector<double>{p.rho}, ',');
    case SpectrumKind::custom: return "custom:" + join(p.values, ',');
  }
  return {};
}

SpectrumProfile parse_spectrum(const std::string& text) {
  const auto parts = split(text, ':');
  SpectrumProfile p;
  const std::string& kind = parts[0];
  auto arg = [&](std::size_t i) -> const std::string& {
    if (i >= parts.size()) fail(ErrorCode::parse, "spectrum '" + text + "' is missing parameters");
    return parts[i];
  };
  if (kind == "geometric") {
    p.kind = SpectrumKind::geometric;
    if (parts.size() > 1) p.rho = parse_double(arg(1), "geometric ratio");
  } else if (kind == "staircase") {
    p.kind = SpectrumKind::staircase;
    if (parts.size() > 1) {
      p.shelf_lengths.clear();
      for (const auto& s : split(arg(1), ',')) p.shelf_lengths.push_back(static_cast<Index>(parse_integer(s, "shelf length")));
    }
    if (parts.size() > 2) {
      p.drop_factors.clear();
      for (const auto& s : split(arg(2), ',')) p.drop_factors.push_back(parse_double(s, "drop factor"));
    }
  } else if (kind == "flat-geometric") {
    p.kind = SpectrumKind::flat_then_geometric;
    p.flat_length = static_cast<Index>(parse_integer(arg(1), "flat length"));
    if (parts.size() > 2) p.rho = parse_double(arg(2), "geometric ratio");
  } else if (kind == "custom") {
    p.kind = SpectrumKind::custom;
    for (const auto& s : split(arg(1), ',')) p.values.push_back(parse_double(s, "singular value"));
  } else {
    fail(ErrorCode::parse, "unknown spectrum kind '" + kind + "'");
  }
  if (parts.size() > 3) fail(ErrorCode::parse, "spectrum '" + text + "' has too many fields");
  return p;
}

std::string to_string(SubspaceKind kind) {
  switch (kind) {
    case SubspaceKind::mixed: return "mixed";
    case SubspaceKind::random_orthogonal: return "random-orthogonal";
    case SubspaceKind::noisy_permutation: return "noisy-permutation";
    case SubspaceKind::noisy_hadamard: return "noisy-hadamard";
  }
  return {};
}

SubspaceKind parse_subspace_kind(const std::string& text) {
  for (auto k : {SubspaceKind::mixed, SubspaceKind::random_orthogonal, SubspaceKind::noisy_permutation,
                 SubspaceKind::noisy_hadamard})
    if (to_string(k) == text) return k;
  if (text == "random") return SubspaceKind::random_orthogonal;
  fail(ErrorCode::parse, "unknown subspace kind '" + text + "'");
}

std::string to_key_value(const TestMatrixSpec& spec) {
  std::ostringstream out;
  out << "n = " << spec.n << "\n"
      << "spectrum = " << to_string(spec.spectrum) << "\n"
      << "subspace = " << to_string(spec.subspace) << "\n"
      << "alpha = " << format_double(spec.alpha) << "\n";
  if (spec.delta >= 0.0) out << "delta = " << format_double(spec.delta) << "\n";
  out << "seed = " << spec.seed << "\n";
  return out.str();
}

namespace {

void apply_spec_entry(TestMatrixSpec& spec, const std::string& key, const std::string& value) {
  if (key == "n") {
    const long long n = parse_integer(value, "n");
    require(n >= 1, ErrorCode::parse, "n must be positive");
    spec.n = static_cast<Index>(n);
  } else if (key == "spectrum") {
    spec.spectrum = parse_spectrum(value);
  } else if (key == "subspace") {
    spec.subspace = parse_subspace_kind(value);
  } else if (key == "alpha") {
    spec.alpha = parse_double(value, "alpha");
  } else if (key == "delta") {
    spec.delta = parse_double(value, "delta");
  } else if (key == "seed") {
    spec.seed = static_cast<std::uint64_t>(parse_integer(value, "seed"));
  } else {
    fail(ErrorCode::parse, "unknown matrix key '" + key + "'");
  }
}

void validate_spec(const TestMatrixSpec& spec) {
  require(spec.alpha >= 0.0 && spec.alpha <= 1.0, ErrorCode::invalid_argument, "alpha must lie in [0, 1]");
  if (spec.subspace == SubspaceKind::mixed || spec.subspace == SubspaceKind::noisy_hadamard)
    require(is_power_of_two(spec.n), ErrorCode::invalid_argument,
            to_string(spec.subspace) + " subspace needs n a power of two");
}

}  // namespace

bool is_test_matrix_key(const std::string& key) {
  return key == "n" || key == "spectrum" || key == "subspace" || key == "alpha" || key == "delta" ||
         key == "seed";
}

TestMatrixSpec spec_from_key_value(const std::map<std::string, std::string>& kv) {
  TestMatrixSpec spec;
  for (const auto& [key, value] : kv) apply_spec_entry(spec, key, value);
  validate_spec(spec);
  return spec;
}

TestMatrixSpec spec_from_section(const KeyValueSection& section) {
  TestMatrixSpec spec;
  for (const auto& e : section.entries) {
    try {
      apply_spec_entry(spec, e.key, e.value);
    } catch (const Error& err) {
      fail(err.code(), "line " + std::to_string(e.line) + ": " + err.what());
    }
  }
  validate_spec(spec);
  return spec;
}

TestMatrixSpec parse_test_matrix_spec(const std::string& text) {
  const auto sections = parse_key_value_text(text);
  require(sections.size() == 1 || (sections.size() == 2 && sections[0].entries.empty()), ErrorCode::parse,
          "a matrix spec holds a single block");
  return spec_from_section(sections.back());
}

}  // namespace skelet

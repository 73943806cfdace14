#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "skelet/keyvalue.hpp"
#include "skelet/matrix.hpp"

namespace skelet {

enum class SpectrumKind { geometric, staircase, flat_then_geometric, custom };

struct SpectrumProfile {
  SpectrumKind kind = SpectrumKind::geometric;
  double rho = 0.85;                            // geometric and flat_then_geometric
  std::vector<Index> shelf_lengths{16};         // staircase, cycled
  std::vector<double> drop_factors{10.0};       // staircase, cycled
  Index flat_length = 0;                        // flat_then_geometric
  std::vector<double> values;                   // custom

  /// n singular values, descending, sigma_1 = 1, all positive.
  std::vector<double> generate(Index n) const;
};

enum class SubspaceKind { mixed, random_orthogonal, noisy_permutation, noisy_hadamard };

struct TestMatrixSpec {
  Index n = 256;
  SpectrumProfile spectrum;
  double alpha = 0.0;
  SubspaceKind subspace = SubspaceKind::mixed;
  double delta = -1.0;  // noise level; negative selects 0.1 / sqrt(n)
  std::uint64_t seed = 0;

  double noise_level() const;
};

struct TestMatrix {
  Matrix a;
  Matrix u;
  std::vector<double> s;
  Matrix v;
};

/// Sylvester Hadamard matrix scaled by 1/sqrt(n); n must be a power of two.
Matrix hadamard(Index n);

/// Orthogonal right factor for the given spec (the V of build_test_matrix).
Matrix build_right_basis(const TestMatrixSpec& spec);

/// A = U diag(s) V^T with U from a seeded Gaussian and V per spec.subspace.
TestMatrix build_test_matrix(const TestMatrixSpec& spec);

struct Calibration {
  double alpha = 0.0;
  double coherence = 0.0;
  Matrix v_k;  // leading k columns of the right basis at the returned alpha
};

/// Leading `cols` columns of the mixed Hadamard/permutation basis (first
/// attempt's permutation) without forming the n x n polar factor. Uses fast
/// Walsh-Hadamard products and a Chebyshev expansion of (M^T M)^{-1/2}.
Matrix mixed_basis_leading_columns(Index n, double alpha, std::uint64_t seed, Index cols);

/// Bisection on alpha so that c_k of the mixed Hadamard/permutation basis
/// lands within `tol` of `target`.
Calibration calibrate_alpha(Index n, Index k, double target, std::uint64_t seed, double tol = 0.005);

/// Flat key-value serialization (`key = value` per line).
std::string to_key_value(const TestMatrixSpec& spec);
TestMatrixSpec spec_from_key_value(const std::map<std::string, std::string>& kv);
/// Entries of a config section; errors carry the offending line number.
TestMatrixSpec spec_from_section(const KeyValueSection& section);
TestMatrixSpec parse_test_matrix_spec(const std::string& text);
bool is_test_matrix_key(const std::string& key);

std::string to_string(SpectrumProfile const& profile);
SpectrumProfile parse_spectrum(const std::string& text);
std::string to_string(SubspaceKind kind);
SubspaceKind parse_subspace_kind(const std::string& text);

}  // namespace skelet

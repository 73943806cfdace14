#pragma once

#include <array>
#include <cstdint>

#include "skelet/matrix.hpp"

namespace skelet {

/// Roles separate the random streams drawn inside one trial.
enum class StreamRole : std::uint32_t {
  sketch = 1,
  sampling = 2,
  left_basis = 3,
  permutation = 4,
  noise = 5,
  matrix_entries = 6,
};

/// Identifies one independent random stream: (seed, trial index, role).
struct RngKey {
  std::uint64_t seed = 0;
  std::uint32_t trial = 0;
  StreamRole role = StreamRole::sketch;
};

/// Philox4x32-10 counter-based generator. Output depends only on the key and
/// the position in the stream, so every draw is reproducible and streams for
/// different trials can be generated in any order or in parallel.
class Philox {
 public:
  explicit Philox(RngKey key) noexcept;

  /// Raw block for a given 64-bit counter value.
  std::array<std::uint32_t, 4> block(std::uint64_t counter) const noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform in the open interval (0, 1).
  double uniform() noexcept;
  /// Standard normal (Box-Muller on two uniforms).
  double normal() noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t trial_;
  std::uint32_t role_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// rows x cols matrix of i.i.d. standard normals; identical keys give
/// bit-identical matrices.
Matrix gaussian(Index rows, Index cols, RngKey key);
inline Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  return gaussian(rows, cols, RngKey{seed, 0, StreamRole::sketch});
}

/// Uniformly random permutation of 0..n-1 (Fisher-Yates).
IndexSet random_permutation(Index n, RngKey key);

}  // namespace skelet

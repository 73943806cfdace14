#include "skelet/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace skelet {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox::Philox(RngKey key) noexcept
    : key_{static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)},
      trial_(key.trial),
      role_(static_cast<std::uint32_t>(key.role)) {}

std::array<std::uint32_t, 4> Philox::block(std::uint64_t counter) const noexcept {
  std::array<std::uint32_t, 4> c{static_cast<std::uint32_t>(counter),
                                 static_cast<std::uint32_t>(counter >> 32), trial_, role_};
  std::uint32_t k0 = key_[0], k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return c;
}

std::uint64_t Philox::next_u64() noexcept {
  if (buf_used_ >= 4) {
    buf_ = block(counter_++);
    buf_used_ = 0;
  }
  const std::uint64_t lo = buf_[buf_used_], hi = buf_[buf_used_ + 1];
  buf_used_ += 2;
  return (hi << 32) | lo;
}

double Philox::uniform() noexcept {
  // 53 random bits, shifted by half an ulp to stay strictly inside (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Philox::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Matrix gaussian(Index rows, Index cols, RngKey key) {
  Matrix g(rows, cols);
  Philox rng(key);
  for (double& x : g.data()) x = rng.normal();
  return g;
}

IndexSet random_permutation(Index n, RngKey key) {
  IndexSet p(n);
  std::iota(p.begin(), p.end(), Index{0});
  Philox rng(key);
  for (Index i = n; i > 1; --i) {
    const auto j = static_cast<Index>(rng.uniform() * static_cast<double>(i));
    std::swap(p[i - 1], p[j < i ? j : i - 1]);
  }
  return p;
}

}  // namespace skelet

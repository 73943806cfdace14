#include <doctest.h>

#include <algorithm>
#include <array>
#include <numeric>

#include "skelet/random.hpp"
#include "support.hpp"

using namespace skelet;

namespace {

// Philox takes its 128-bit counter as (64-bit position, trial, role) and its
// key from the seed, so any reference counter/key pair can be expressed.
std::array<std::uint32_t, 4> philox_block(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  const std::uint64_t seed = key[0] | (static_cast<std::uint64_t>(key[1]) << 32);
  const Philox gen(RngKey{seed, ctr[2], static_cast<StreamRole>(ctr[3])});
  return gen.block(ctr[0] | (static_cast<std::uint64_t>(ctr[1]) << 32));
}

}  // namespace

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox_block({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox_block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox_block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("gaussian is deterministic per key") {
  const Matrix a = gaussian(7, 5, 42);
  CHECK(a == gaussian(7, 5, 42));
  CHECK(frobenius_norm(a - gaussian(7, 5, 43)) > 0.0);
  CHECK(frobenius_norm(a - gaussian(7, 5, RngKey{42, 1, StreamRole::sketch})) > 0.0);
  CHECK(frobenius_norm(a - gaussian(7, 5, RngKey{42, 0, StreamRole::sampling})) > 0.0);
}

TEST_CASE("gaussian moments") {
  const Matrix g = gaussian(1000, 100, RngKey{7, 3, StreamRole::sketch});
  double mean = 0.0;
  for (double x : g.data()) mean += x;
  mean /= static_cast<double>(g.size());
  double var = 0.0;
  for (double x : g.data()) var += (x - mean) * (x - mean);
  var /= static_cast<double>(g.size() - 1);
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("uniform stays in the open unit interval") {
  Philox gen(RngKey{1, 2, StreamRole::sampling});
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = gen.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(sum / 100000 - 0.5) < 0.01);
}

TEST_CASE("random permutation is a permutation and depends on the key") {
  const IndexSet p = random_permutation(50, RngKey{3, 0, StreamRole::permutation});
  IndexSet sorted = p;
  std::sort(sorted.begin(), sorted.end());
  IndexSet iota(50);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(sorted == iota);
  CHECK(p == random_permutation(50, RngKey{3, 0, StreamRole::permutation}));
  CHECK(p != random_permutation(50, RngKey{4, 0, StreamRole::permutation}));
}

#pragma once

// Counter-based randomness. Every draw is a pure function of
// (master seed, stream tag, SNR index, trial index, draw index), so results do
// not depend on how trials are spread across threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "stbc/complex_linalg.hpp"

namespace stbc {

// Philox4x32 with 10 rounds.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53U;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57U;
  static constexpr std::uint32_t kW0 = 0x9E3779B9U;
  static constexpr std::uint32_t kW1 = 0xBB67AE85U;
};

enum class StreamTag : std::uint32_t {
  Channel = 1,
  Noise = 2,
  Symbols = 3,
  Mixing = 4,
  Test = 5,
};

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamTag tag, std::uint32_t snr_index,
               std::uint32_t trial_index)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        tag_(static_cast<std::uint32_t>(tag)),
        snr_(snr_index),
        trial_(trial_index) {}

  std::uint32_t next_u32() {
    if (used_ == 4) {
      buf_ = Philox4x32::generate({tag_, snr_, trial_, draw_++}, key_);
      used_ = 0;
    }
    return buf_[used_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  // Uniform integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = 0;
    do v = next_u64();
    while (v >= limit);
    return v % n;
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Circularly symmetric CN(0, 1): real and imaginary parts N(0, 1/2).
  cplx complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

 private:
  Philox4x32::Key key_;
  std::uint32_t tag_;
  std::uint32_t snr_;
  std::uint32_t trial_;
  std::uint32_t draw_ = 0;
  Philox4x32::Block buf_{};
  int used_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline ComplexMatrix complex_normal_matrix(std::size_t rows, std::size_t cols,
                                           RandomStream& rng) {
  ComplexMatrix m(rows, cols);
  for (auto& v : m.entries()) v = rng.complex_normal();
  return m;
}

}  // namespace stbc

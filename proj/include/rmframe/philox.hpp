#pragma once

// Counter-based pseudorandom numbers: Philox4x64 with 10 rounds.
//
// Every draw is a pure function of (key, counter), so a curve generated from
// (seed, stream, index) is reproducible in any language that implements the
// same block function. Known-answer vectors are in tests/test_core.cpp.

#include <array>
#include <cmath>
#include <cstdint>

namespace rmframe {

class Philox4x64 {
 public:
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Block block(Block ctr, Key key) {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      ctr = round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  static Block round(const Block& c, const Key& k) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Sequential view over a Philox stream keyed by (seed, stream).
///
/// Draw i comes from word (i mod 4) of block ctr = (i / 4, 0, 0, 0).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      buf_ = Philox4x64::block({ctr_, 0, 0, 0}, key_);
      ++ctr_;
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box–Muller (one value per two uniforms).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::uint64_t counter() const { return ctr_; }

 private:
  Philox4x64::Key key_;
  std::uint64_t ctr_ = 0;
  Philox4x64::Block buf_{};
  int pos_ = 4;
};

}  // namespace rmframe

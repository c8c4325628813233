#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// A draw is a pure function of (key, counter), so every Monte Carlo sample
// can be regenerated from its index alone.

#include <array>
#include <cstdint>

namespace cbound {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

constexpr void philox_round(PhiloxCounter& ctr, const PhiloxKey& key) {
  const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
  const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace detail

constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int r = 0; r < 10; ++r) {
    detail::philox_round(ctr, key);
    if (r < 9) {
      key[0] += detail::kPhiloxW0;
      key[1] += detail::kPhiloxW1;
    }
  }
  return ctr;
}

/// 53-bit uniform in [0, 1) from two 32-bit words.
constexpr double to_unit_double(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 21) ^ (std::uint64_t{lo} >> 11);
  return static_cast<double>(bits & ((std::uint64_t{1} << 53) - 1)) * 0x1.0p-53;
}

/// Uniform stream for one sample, keyed by (seed, stream, sample).
///
/// Counter layout: {block, sample_lo, sample_hi, stream}; key = seed.
/// Each block yields two doubles.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint32_t stream, std::uint64_t sample)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        sample_lo_(static_cast<std::uint32_t>(sample)),
        sample_hi_(static_cast<std::uint32_t>(sample >> 32)),
        stream_(stream) {}

  double next_uniform() {
    if (slot_ == 2) {
      words_ = philox4x32_10({block_++, sample_lo_, sample_hi_, stream_}, key_);
      slot_ = 0;
    }
    const double u = to_unit_double(words_[2 * slot_], words_[2 * slot_ + 1]);
    ++slot_;
    return u;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }

 private:
  PhiloxKey key_;
  std::uint32_t sample_lo_;
  std::uint32_t sample_hi_;
  std::uint32_t stream_;
  std::uint32_t block_ = 0;
  PhiloxCounter words_{};
  int slot_ = 2;
};

}  // namespace cbound

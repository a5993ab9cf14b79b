#pragma once

#include <cstdint>
#include <utility>

namespace lri {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 output function (Steele, Lea, Flood). Applied to
// key + counter * kGolden it yields the SplitMix64 sequence with
// random access by counter, which is what makes path streams
// mergeable in any order.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream key for one path of a batch. Injective in path_index for a
// fixed master seed.
constexpr std::uint64_t derive_stream(std::uint64_t master_seed,
                                      std::uint64_t path_index) {
  return mix64(mix64(master_seed ^ kGolden) + path_index);
}

// Counter-based driver noise: the pair (U_n, V_n) for step n is a pure
// function of (key, n). U decides which arm is inspected, V whether the
// inspected arm pays. Values are bin centers (k + 0.5) / 2^52, so they
// lie strictly inside (0,1) and the absorbing states stay absorbing.
class DriverNoise {
 public:
  DriverNoise() : key_(0) {}
  explicit DriverNoise(std::uint64_t stream_key) : key_(stream_key) {}

  static double unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
  }

  std::pair<double, double> pair(std::uint64_t n) const {
    const std::uint64_t u = mix64(key_ + (2 * n) * kGolden);
    const std::uint64_t v = mix64(key_ + (2 * n + 1) * kGolden);
    return {unit_open(u), unit_open(v)};
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace lri

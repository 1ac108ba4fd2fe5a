#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bpg {

namespace detail {

// SplitMix64 finalizer; used to whiten seeds and derive substreams.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Deterministic seedable random stream. Two streams built from the same seed
// produce bit-identical draw sequences. Substreams are derived from the base
// seed (not the current state), so substream(s, k) does not depend on how many
// draws the parent has made or on the order substreams are created.
//
// All floating-point draws are mapped from raw 64-bit output by fixed
// arithmetic, keeping the sequence fully specified by this file.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed)
      : base_seed_(seed), engine_(detail::splitmix64(seed)) {}

  std::uint64_t base_seed() const { return base_seed_; }
  std::uint64_t position() const { return position_; }

  // Substream for epoch s, step k. Mixing is a fixed 64-bit hash chain.
  RandomStream substream(std::uint64_t s, std::uint64_t k) const {
    std::uint64_t mixed = detail::splitmix64(base_seed_ ^ detail::splitmix64(s));
    mixed = detail::splitmix64(mixed ^ detail::splitmix64(~k));
    return RandomStream(mixed);
  }

  std::uint64_t next_u64() {
    ++position_;
    return engine_();
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Multiply-shift map; deterministic.
  std::int64_t uniform_int(std::int64_t n) {
    const auto u = next_u64();
    return static_cast<std::int64_t>(
        (static_cast<unsigned __int128>(u) * static_cast<std::uint64_t>(n)) >> 64);
  }

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();  // guard log(0)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t base_seed_;
  std::mt19937_64 engine_;
  std::uint64_t position_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bpg

#pragma once

#include <cstdint>
#include <limits>

namespace kslog {

// SplitMix64. Used both as a small sequential generator and as the mixing
// function that derives independent per-site streams from
// (master seed, replicate, site).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix(z);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Counter-based stream: the generator for a given (seed, replicate, site)
// does not depend on generation order.
inline SplitMix64 site_stream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t site) {
  std::uint64_t h = SplitMix64::mix(seed ^ 0x6a09e667f3bcc909ULL);
  h = SplitMix64::mix(h ^ (replicate + 0x3c6ef372fe94f82bULL));
  h = SplitMix64::mix(h ^ (site + 0xa54ff53a5f1d36f1ULL));
  return SplitMix64(h);
}

}  // namespace kslog

#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace aflsim {

/// SplitMix64: tiny, fast, and good enough to drive the standard
/// distributions. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent substream seed from a base seed and a path of tags,
/// e.g. derive_seed(run_seed, {kLocalNoise, round, owner}).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = base;
  for (auto tag : path) {
    SplitMix64 mix(h ^ (tag * 0xd6e8feb86659fd93ULL));
    h = mix();
  }
  return h;
}

// Stream tags.
inline constexpr std::uint64_t kStreamGlobalNoise = 1;
inline constexpr std::uint64_t kStreamLocalNoise = 2;
inline constexpr std::uint64_t kStreamMarkup = 3;
inline constexpr std::uint64_t kStreamCohort = 4;
inline constexpr std::uint64_t kStreamScenario = 5;

}  // namespace aflsim

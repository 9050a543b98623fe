#pragma once

// Seeded randomness. Every random decision in the library draws from a
// SplitMix64 stream whose starting state is derived from a base seed and a
// short key tuple, e.g. (seed, kEdgeRow, u) for the edges (u, v), v > u.
// Streams never depend on the order in which other streams are consumed, so
// graphs and trials are reproducible under any scheduling.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace robudom {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream tags keep the derived keys of different consumers disjoint.
enum class StreamTag : std::uint64_t {
  kEdgeRow = 1,
  kResample = 2,
  kSampling = 3,
  kConflict = 4,
  kTrial = 5,
  kTrialGraph = 6,
  kTrialConstruct = 7,
  kCheck = 8,
};

constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(base + kGoldenGamma);
  for (const std::uint64_t k : keys) {
    h = mix64(h ^ mix64(k + kGoldenGamma));
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t base, StreamTag tag,
                                    std::uint64_t a = 0, std::uint64_t b = 0) noexcept {
  return derive_seed(base, {static_cast<std::uint64_t>(tag), a, b});
}

// Satisfies UniformRandomBitGenerator, so it also plugs into <random>
// distributions where a portable closed form is not needed.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(SplitMix64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound), Lemire's multiply-and-reject.
inline std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound) noexcept {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Threshold t with P(rng() < t) = p up to 2^-64; p must lie in [0, 1).
inline std::uint64_t bernoulli_threshold(double p) noexcept {
  return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

inline bool bernoulli(SplitMix64& rng, double p) noexcept {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return rng() < bernoulli_threshold(p);
}

// Number of failures before the next success of a Bernoulli(p) sequence,
// given log1m_p = log(1 - p) < 0.
inline std::uint64_t geometric_skip(SplitMix64& rng, double log1m_p) noexcept {
  const double u = 1.0 - uniform01(rng);  // (0, 1]
  const double k = std::floor(std::log(u) / log1m_p);
  if (!(k < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(k);
}

}  // namespace robudom

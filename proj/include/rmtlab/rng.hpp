#pragma once

#include <concepts>
#include <cstdint>
#include <string_view>

namespace rmtlab {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Constants are fixed and
/// part of the reproducibility contract: changing them changes every sample.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the i-th Monte Carlo sample: mix64(master ^ i).
constexpr std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ index);
}

/// Key of the independent stream attached to matrix entry (i, j), i <= j.
constexpr std::uint64_t entry_key(std::uint64_t seed, std::uint64_t i, std::uint64_t j) noexcept {
  return mix64(seed ^ mix64((i << 32) ^ j ^ 0x5bd1e995ULL));
}

/// Child key for a named purpose (e.g. the GOE part of an interpolated matrix).
constexpr std::uint64_t child_key(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix64(mix64(seed) ^ tag);
}

/// SplitMix64 stream with a Marsaglia polar Gaussian sampler.
class RandomStream {
 public:
  static constexpr std::string_view kGaussianMethod = "marsaglia-polar";

  explicit RandomStream(std::uint64_t key) noexcept : state_(key) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal variate.
  double normal() noexcept;

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Noise source for stochastic integrators: anything with `double normal()`.
template <class S>
concept NormalSource = requires(S& s) {
  { s.normal() } -> std::convertible_to<double>;
};

}  // namespace rmtlab

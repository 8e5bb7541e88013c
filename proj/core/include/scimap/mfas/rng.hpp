#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace scimap::mfas {

inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64";

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of the `index`-th child stream of `seed`.  Children of the same seed
/// are independent of the number of children drawn, so best-of-t and
/// best-of-(t+k) share their first t runs.
std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t index);

/// mt19937_64 seeded through SplitMix64, with a portable bounded draw
/// (the standard distributions differ between library vendors).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace scimap::mfas

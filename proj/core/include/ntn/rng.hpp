#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ntn {

/// Seeded PRNG with platform-independent derived distributions.
///
/// std::uniform_*_distribution output differs between standard libraries, so
/// the conversions here are spelled out to keep runs byte-identical across
/// toolchains for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, bound). bound must be non-zero.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Stable (FNV-1a) hash of a label, for deriving per-entity seeds.
std::uint64_t label_hash(std::string_view label);

}  // namespace ntn

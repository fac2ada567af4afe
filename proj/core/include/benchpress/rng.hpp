#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace benchpress {

/// Deterministic random source.
///
/// Wraps std::mt19937_64 but derives uniforms and normals from raw engine
/// output itself, so a given seed yields identical streams on every standard
/// library (std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n), unbiased. n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal draw (polar Box-Muller).
  double normal();

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// splitmix64 finalizer; turns correlated inputs into independent-looking seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for an independent stream identified by (key, index).
std::uint64_t derive_seed(std::string_view key, std::uint64_t index);

}  // namespace benchpress

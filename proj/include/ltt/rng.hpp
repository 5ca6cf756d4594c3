#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ltt {

/// Seeded random stream with platform-independent uniform and Gaussian draws.
///
/// Built on std::mt19937_64 (whose output sequence is fixed by the standard);
/// uniforms use the top 53 bits and normals use Box-Muller, so the same seed
/// reproduces the same draws with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();

  /// Standard normal.
  double normal();

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Independent stream keyed by (this stream's seed, tag). Does not advance *this.
  Rng derive(std::uint64_t tag) const { return Rng(mix_seed(seed_, tag)); }
  Rng derive(std::string_view tag) const { return derive(hash_tag(tag)); }

  static std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);
  static std::uint64_t hash_tag(std::string_view tag);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace ltt

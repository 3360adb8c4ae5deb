#pragma once

#include <cstdint>
#include <random>

namespace ritzpen {

/// Deterministic random stream.  The engine is seeded explicitly and the
/// uniform mapping is written out by hand because the distribution
/// adapters in <random> are not required to produce identical sequences
/// across standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  /// Derive an independent stream for a named sub-purpose.  Same parent
  /// seed + same stream id always yields the same child stream.
  Rng fork(std::uint64_t stream_id) const {
    std::uint64_t h = seed_ ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    return Rng(h);
  }

private:
  std::uint64_t seed_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace ritzpen

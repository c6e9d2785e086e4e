#pragma once

#include <cstdint>
#include <random>

namespace gem3d {

/// Deterministic random stream keyed by (seed, stream_id).
///
/// Every Monte-Carlo trial owns one stream so trials can run on any thread
/// and still merge into the same result. The engine is mt19937_64 seeded
/// through std::seed_seq and Gaussian draws use Box-Muller, so draws are
/// identical across standard library implementations.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  double normal(double mean = 0.0, double sigma = 1.0);
  bool bernoulli(double p = 0.5) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline RandomStream seeded_rng(std::uint64_t seed, std::uint64_t stream_id) {
  return RandomStream(seed, stream_id);
}

}  // namespace gem3d

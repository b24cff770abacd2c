#pragma once

#include <cstdint>
#include <random>

namespace levycox {

/// Derive an independent stream seed from a master seed. Used by the
/// coverage harness to give each replication its own reproducible stream:
/// two splitmix64 steps applied to master ^ (stream+1)*golden_gamma.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Seeded random source with explicitly specified output transforms, so every
/// sampler in the library reproduces bit for bit for a given seed on any
/// platform. The engine is std::mt19937_64 (fully specified by the standard);
/// the variate transforms below deliberately avoid std::*_distribution, whose
/// output is implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1).
  double uniform_pos() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard exponential via inversion.
  double exponential();

  /// Standard normal via Box-Muller (no spare caching).
  double normal();

  /// Uniform integer in [0, bound), bound >= 1, by rejection.
  std::uint64_t integer(std::uint64_t bound);

  /// Poisson draw, exact for any mean (chunked multiplication method).
  long poisson(double mean);

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace levycox

#include "levycox/rng.hpp"

#include <cmath>

#include "levycox/errors.hpp"

namespace levycox {

namespace {
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t state = master ^ ((stream + 1) * 0x9E3779B97F4A7C15ULL);
  splitmix64(state);
  return splitmix64(state);
}

double Rng::exponential() { return -std::log1p(-uniform()); }

double Rng::normal() {
  const double u1 = uniform_pos();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::uint64_t Rng::integer(std::uint64_t bound) {
  if (bound == 0) throw ConfigError("Rng::integer: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % bound;
}

long Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw ConfigError("Rng::poisson: mean must be >= 0");
  long total = 0;
  // Multiplication method is exact but underflows for large means; split the
  // mean into chunks of at most 30 and sum independent draws.
  while (mean > 0.0) {
    const double chunk = mean > 30.0 ? 30.0 : mean;
    mean -= chunk;
    const double threshold = std::exp(-chunk);
    double product = 1.0;
    long count = -1;
    do {
      product *= uniform_pos();
      ++count;
    } while (product > threshold);
    total += count;
  }
  return total;
}

}  // namespace levycox

// Seedable RNG with explicit draw algorithms so that runs are reproducible
// byte-for-byte regardless of the standard library's distribution choices.
#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace dsaa {

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t raw() { return gen_(); }

  // uniform in [0, 1)
  double uniform() { return (raw() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n), unbiased via rejection
  int uniform_int(int n) {
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    uint64_t x;
    do {
      x = raw();
    } while (x >= limit);
    return static_cast<int>(x % un);
  }

  // standard Gumbel draw; u is clamped away from {0,1} to avoid infinities
  double gumbel() {
    constexpr double kEps = 1e-10;
    double u = uniform();
    if (u < kEps) u = kEps;
    if (u > 1.0 - kEps) u = 1.0 - kEps;
    return -std::log(-std::log(u));
  }

 private:
  std::mt19937_64 gen_;
};

// splitmix64 step; used to derive independent per-component seeds from one
// master seed without coupling their streams.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
  uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace dsaa

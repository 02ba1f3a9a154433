#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace gph {

// Deterministic normal sampler.  std::normal_distribution is
// implementation-defined, so Box-Muller is done by hand to keep outputs
// byte-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {
    // 53-bit mantissa in [0,1)
    return (eng_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925287 * u2);
  }

  std::complex<double> cgaussian() {
    double re = gaussian();
    double im = gaussian();
    return {re, im};
  }

  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// stable seed mixing for (seed, index) streams
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace gph

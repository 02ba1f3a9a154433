#pragma once

#include <cstdint>

#include "gph/multiplier.hpp"

namespace gph {

// One-particle state phi on a periodic grid.  Mass is the quadrature L^2
// norm squared; hierarchy constructions require mass == 1.
struct WaveFunction {
  Grid grid;
  std::vector<cplx> values;  // n^d entries

  double mass() const;
  void normalize();  // scale to mass 1
  bool finite() const;
};

WaveFunction plane_wave(const Grid& g, std::span<const int> mode);
WaveFunction plane_wave(const Grid& g, int mode);  // d=1 shorthand

// periodized real Gaussian bump, normalized to unit mass
WaveFunction gaussian_state(const Grid& g, std::span<const double> center,
                            double width);
WaveFunction gaussian_state(const Grid& g, double center, double width);

// complex-Gaussian Fourier coefficients damped by <xi>^-decay, unit mass
WaveFunction random_state(const Grid& g, std::uint64_t seed,
                          double decay = 2.0);
// same but coefficients outside |mode| <= band set to zero
WaveFunction band_limited_state(const Grid& g, std::uint64_t seed, int band);

std::vector<cplx> fourier_coefficients(const WaveFunction& phi);
double h_alpha_norm_sq(const WaveFunction& phi, double alpha);  // ||<D>^a phi||^2
double kinetic_energy(const WaveFunction& phi);                 // ||grad phi||^2
double lp_band_mass(const WaveFunction& phi, int j, LpFamily family);

}  // namespace gph

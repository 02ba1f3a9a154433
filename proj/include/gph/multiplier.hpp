#pragma once

#include <span>
#include <vector>

#include "gph/spectral.hpp"

namespace gph {

enum class LpFamily { Sharp, Smooth };

// Fourier multiplier acting on a chosen set of arguments of a TensorField.
// The symbol is stored sampled on the n^d frequency lattice of one argument.
class FourierMultiplier {
 public:
  FourierMultiplier(const Grid& g, std::vector<double> symbol);

  const std::vector<double>& symbol() const { return symbol_; }

  // multiply Fourier-side coefficients on the selected arguments
  void apply_fourier(TensorField& fhat, std::span<const int> args) const;

  // full action on a space-side field: transform selected args, multiply,
  // transform back.  `signs` gives the analysis sign per selected arg.
  void apply(TensorField& f, std::span<const int> args,
             std::span<const int> signs) const;

 private:
  Grid grid_;
  std::vector<double> symbol_;
};

// <xi>^alpha = (1+|xi|^2)^(alpha/2); alpha=0 is the identity
FourierMultiplier bessel_multiplier(const Grid& g, double alpha);

// Littlewood-Paley projector p_j.
// Sharp: indicator of 2^j <= |xi| < 2^(j+1) for j>=1, |xi| < 2 for j=0.
// Smooth: raised-cosine difference psi(|xi|/2^j) - psi(|xi|/2^(j-1)) with
// psi = 1 on [0,4/3], 0 on [8/3,inf); supports sit inside
// (2/3)2^j < |xi| < 3*2^j for j>=1 and |xi| <= 3 for j=0, and the family
// sums to one on the whole lattice.
FourierMultiplier lp_multiplier(const Grid& g, int j, LpFamily family);
double lp_symbol(double abs_xi, int j, LpFamily family);
// smallest J such that sum_{j<=J} p_j == 1 on the grid's lattice
int lp_max_band(const Grid& g);

// indicator of the unit cube [r, r+1)^d translated by integer vector r,
// applied to one argument's frequencies
FourierMultiplier cube_multiplier(const Grid& g, std::span<const long> r);

// convenience: lp projection of one argument of a space-side field
TensorField lp_project(const TensorField& f, int j, LpFamily family, int arg,
                       int sign = -1);

}  // namespace gph

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace gph {

// Periodic grid on [0,L)^d with n points per axis, n a power of two.
// Frequencies follow FFT ordering with the Nyquist mode on the negative side.
class Grid {
 public:
  Grid() = default;
  Grid(int d, int n, double L);

  int dim() const { return d_; }
  int points() const { return n_; }            // per axis
  double length() const { return L_; }         // per axis
  double dx() const { return dx_; }            // quadrature weight per axis
  std::size_t arg_points() const { return N_; }  // n^d, lattice of one argument

  // integer mode for axis index i: 0,1,...,n/2-1,-n/2,...,-1
  int mode(int i) const { return i < n_ / 2 ? i : i - n_; }
  // angular frequency 2*pi*mode/L
  double freq(int i) const { return two_pi_over_L_ * mode(i); }

  // |u|^2 over the n^d lattice of one d-dimensional argument (row-major)
  const std::vector<double>& freq_sq() const { return freq_sq_; }

  // quadrature weight for a function of q arguments: (dx^d)^q
  double weight(int q) const { return std::pow(dx_, d_ * q); }

  bool operator==(const Grid& o) const {
    return d_ == o.d_ && n_ == o.n_ && L_ == o.L_;
  }

 private:
  int d_ = 1;
  int n_ = 0;
  double L_ = 0;
  double dx_ = 0;
  double two_pi_over_L_ = 0;
  std::size_t N_ = 0;
  std::vector<double> freq_sq_;
};

Grid make_grid(int d, int n, double L);

}  // namespace gph

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "gph/grid.hpp"

namespace gph {

using cplx = std::complex<double>;

// Complex field of q d-dimensional arguments on a shared grid, stored flat
// in row-major order (argument 0 slowest).  Used both for multivariate
// functions f(x_1..x_q) and for marginal kernels (q = 2k, primed block last).
class TensorField {
 public:
  TensorField() = default;
  TensorField(const Grid& g, int args);

  const Grid& grid() const { return grid_; }
  int args() const { return args_; }
  std::size_t size() const { return v_.size(); }

  cplx* data() { return v_.data(); }
  const cplx* data() const { return v_.data(); }
  cplx& operator[](std::size_t i) { return v_[i]; }
  const cplx& operator[](std::size_t i) const { return v_[i]; }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  TensorField& operator+=(const TensorField& o);
  TensorField& operator-=(const TensorField& o);
  TensorField& operator*=(cplx c);
  void axpy(cplx a, const TensorField& o);  // *this += a*o

  double max_abs() const;
  bool finite() const;

 private:
  Grid grid_;
  int args_ = 0;
  std::vector<cplx> v_;
};

namespace spectral {

// Transform selected arguments.  sign=-1 is the analysis convention for
// unprimed variables (coefficient of e^{+iux}); sign=+1 analyzes primed
// variables (coefficient of e^{-iux'}).  `forward` false inverts.
// Normalization is unitary: a plane wave e^{iux}/L^{d/2} has a single unit
// coefficient and Parseval holds against the dx^d quadrature weight.
void transform(TensorField& f, std::span<const int> args, int sign,
               bool forward);

// all arguments, same sign
void transform_all(TensorField& f, int sign, bool forward);

// marginal-kernel convention for a field of 2k args: unprimed block sign -1,
// primed block sign +1
void transform_kernel(TensorField& f, int k, bool forward);

// multiply by a per-argument symbol given on the n^d lattice of argument a
void apply_arg_symbol(TensorField& f, int a, std::span<const double> symbol);
void apply_arg_symbol(TensorField& f, int a, std::span<const cplx> symbol);

}  // namespace spectral

}  // namespace gph

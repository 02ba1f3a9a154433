#include "gph/multiplier.hpp"

#include <cmath>
#include <stdexcept>

namespace gph {

FourierMultiplier::FourierMultiplier(const Grid& g, std::vector<double> symbol)
    : grid_(g), symbol_(std::move(symbol)) {
  if (symbol_.size() != g.arg_points())
    throw std::invalid_argument("multiplier symbol size mismatch");
}

void FourierMultiplier::apply_fourier(TensorField& fhat,
                                      std::span<const int> args) const {
  for (int a : args) spectral::apply_arg_symbol(fhat, a, symbol_);
}

void FourierMultiplier::apply(TensorField& f, std::span<const int> args,
                              std::span<const int> signs) const {
  for (std::size_t i = 0; i < args.size(); ++i) {
    int a[1] = {args[i]};
    spectral::transform(f, a, signs[i], true);
    spectral::apply_arg_symbol(f, args[i], symbol_);
    spectral::transform(f, a, signs[i], false);
  }
}

FourierMultiplier bessel_multiplier(const Grid& g, double alpha) {
  std::vector<double> sym(g.arg_points());
  for (std::size_t s = 0; s < sym.size(); ++s)
    sym[s] = std::pow(1.0 + g.freq_sq()[s], 0.5 * alpha);
  return FourierMultiplier(g, std::move(sym));
}

namespace {

// transition profile: 1 on [0,4/3], 0 on [8/3,inf), raised cosine between
double lp_psi(double r) {
  constexpr double lo = 4.0 / 3.0, hi = 8.0 / 3.0;
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  return 0.5 * (1.0 + std::cos(3.14159265358979323846 * (r - lo) / (hi - lo)));
}

}  // namespace

double lp_symbol(double abs_xi, int j, LpFamily family) {
  if (family == LpFamily::Sharp) {
    if (j == 0) return abs_xi < 2.0 ? 1.0 : 0.0;
    const double lo = std::ldexp(1.0, j), hi = std::ldexp(1.0, j + 1);
    return (abs_xi >= lo && abs_xi < hi) ? 1.0 : 0.0;
  }
  if (j == 0) return lp_psi(abs_xi);
  return lp_psi(abs_xi / std::ldexp(1.0, j)) -
         lp_psi(abs_xi / std::ldexp(1.0, j - 1));
}

FourierMultiplier lp_multiplier(const Grid& g, int j, LpFamily family) {
  if (j < 0) throw std::invalid_argument("lp band index must be >= 0");
  std::vector<double> sym(g.arg_points());
  for (std::size_t s = 0; s < sym.size(); ++s)
    sym[s] = lp_symbol(std::sqrt(g.freq_sq()[s]), j, family);
  return FourierMultiplier(g, std::move(sym));
}

int lp_max_band(const Grid& g) {
  double umax = 0.0;
  for (double fs : g.freq_sq()) umax = std::max(umax, std::sqrt(fs));
  int j = 0;
  while (std::ldexp(1.0, j) < umax) ++j;
  return j + 1;
}

FourierMultiplier cube_multiplier(const Grid& g, std::span<const long> r) {
  if (static_cast<int>(r.size()) != g.dim())
    throw std::invalid_argument("cube index size must equal the dimension");
  const int n = g.points();
  std::vector<double> sym(g.arg_points());
  for (std::size_t s = 0; s < sym.size(); ++s) {
    std::size_t rem = s;
    bool inside = true;
    for (int ax = g.dim() - 1; ax >= 0; --ax) {
      int i = static_cast<int>(rem % n);
      rem /= n;
      double u = g.freq(i);
      double lo = static_cast<double>(r[ax]);
      if (!(u >= lo && u < lo + 1.0)) inside = false;
    }
    sym[s] = inside ? 1.0 : 0.0;
  }
  return FourierMultiplier(g, std::move(sym));
}

TensorField lp_project(const TensorField& f, int j, LpFamily family, int arg,
                       int sign) {
  TensorField out = f;
  FourierMultiplier m = lp_multiplier(f.grid(), j, family);
  int args[1] = {arg};
  int signs[1] = {sign};
  m.apply(out, args, signs);
  return out;
}

}  // namespace gph

#include "gph/wavefunction.hpp"

#include <cmath>
#include <stdexcept>

#include "gph/rng.hpp"

namespace gph {

namespace {

TensorField as_field(const WaveFunction& phi) {
  TensorField f(phi.grid, 1);
  f.values() = phi.values;
  return f;
}

std::vector<double> lattice_coord(const Grid& g, int axis_index) {
  (void)axis_index;
  std::vector<double> x(g.points());
  for (int i = 0; i < g.points(); ++i) x[i] = i * g.dx();
  return x;
}

}  // namespace

double WaveFunction::mass() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * grid.weight(1);
}

void WaveFunction::normalize() {
  double m = mass();
  if (!(m > 0)) throw std::invalid_argument("cannot normalize a null state");
  double c = 1.0 / std::sqrt(m);
  for (auto& v : values) v *= c;
}

bool WaveFunction::finite() const {
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

WaveFunction plane_wave(const Grid& g, std::span<const int> mode) {
  if (static_cast<int>(mode.size()) != g.dim())
    throw std::invalid_argument("plane wave mode size must equal dimension");
  WaveFunction phi{g, std::vector<cplx>(g.arg_points())};
  const double amp = 1.0 / std::sqrt(std::pow(g.length(), g.dim()));
  const auto x = lattice_coord(g, 0);
  const double two_pi_over_L = 2.0 * 3.14159265358979323846 / g.length();
  const int n = g.points();
  for (std::size_t s = 0; s < phi.values.size(); ++s) {
    std::size_t rem = s;
    double phase = 0.0;
    for (int ax = g.dim() - 1; ax >= 0; --ax) {
      int i = static_cast<int>(rem % n);
      rem /= n;
      phase += two_pi_over_L * mode[ax] * x[i];
    }
    phi.values[s] = std::polar(amp, phase);
  }
  return phi;
}

WaveFunction plane_wave(const Grid& g, int mode) {
  std::vector<int> m(g.dim(), 0);
  m[0] = mode;
  return plane_wave(g, m);
}

WaveFunction gaussian_state(const Grid& g, std::span<const double> center,
                            double width) {
  if (static_cast<int>(center.size()) != g.dim())
    throw std::invalid_argument("gaussian center size must equal dimension");
  if (!(width > 0)) throw std::invalid_argument("gaussian width must be > 0");
  WaveFunction phi{g, std::vector<cplx>(g.arg_points())};
  const auto x = lattice_coord(g, 0);
  const int n = g.points();
  const double L = g.length();
  for (std::size_t s = 0; s < phi.values.size(); ++s) {
    std::size_t rem = s;
    double val = 1.0;
    for (int ax = g.dim() - 1; ax >= 0; --ax) {
      int i = static_cast<int>(rem % n);
      rem /= n;
      // sum over periodic images so the bump stays smooth across the seam
      double acc = 0.0;
      for (int img = -2; img <= 2; ++img) {
        double dxc = x[i] - center[ax] + img * L;
        acc += std::exp(-dxc * dxc / (2.0 * width * width));
      }
      val *= acc;
    }
    phi.values[s] = val;
  }
  phi.normalize();
  return phi;
}

WaveFunction gaussian_state(const Grid& g, double center, double width) {
  std::vector<double> c(g.dim(), center);
  return gaussian_state(g, c, width);
}

WaveFunction random_state(const Grid& g, std::uint64_t seed, double decay) {
  Rng rng(mix_seed(seed, 0x7a7eULL));
  TensorField f(g, 1);
  for (std::size_t s = 0; s < f.size(); ++s)
    f[s] = rng.cgaussian() * std::pow(1.0 + g.freq_sq()[s], -0.5 * decay);
  spectral::transform_all(f, -1, false);
  WaveFunction phi{g, std::move(f.values())};
  phi.normalize();
  return phi;
}

WaveFunction band_limited_state(const Grid& g, std::uint64_t seed, int band) {
  Rng rng(mix_seed(seed, 0xba4dULL));
  TensorField f(g, 1);
  const int n = g.points();
  for (std::size_t s = 0; s < f.size(); ++s) {
    std::size_t rem = s;
    bool keep = true;
    for (int ax = g.dim() - 1; ax >= 0; --ax) {
      int i = static_cast<int>(rem % n);
      rem /= n;
      int m = i < n / 2 ? i : i - n;
      if (std::abs(m) > band) keep = false;
    }
    cplx c = rng.cgaussian();  // always draw, keeps streams index-stable
    f[s] = keep ? c : cplx{0.0, 0.0};
  }
  spectral::transform_all(f, -1, false);
  WaveFunction phi{g, std::move(f.values())};
  phi.normalize();
  return phi;
}

std::vector<cplx> fourier_coefficients(const WaveFunction& phi) {
  TensorField f = as_field(phi);
  spectral::transform_all(f, -1, true);
  return std::move(f.values());
}

double h_alpha_norm_sq(const WaveFunction& phi, double alpha) {
  auto c = fourier_coefficients(phi);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    s += std::pow(1.0 + phi.grid.freq_sq()[i], alpha) * std::norm(c[i]);
  return s;
}

double kinetic_energy(const WaveFunction& phi) {
  auto c = fourier_coefficients(phi);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    s += phi.grid.freq_sq()[i] * std::norm(c[i]);
  return s;
}

double lp_band_mass(const WaveFunction& phi, int j, LpFamily family) {
  auto c = fourier_coefficients(phi);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    s += lp_symbol(std::sqrt(phi.grid.freq_sq()[i]), j, family) *
         std::norm(c[i]);
  return s;
}

}  // namespace gph

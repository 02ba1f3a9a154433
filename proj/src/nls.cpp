#include "gph/nls.hpp"

#include <cmath>
#include <stdexcept>

#include "gph/errors.hpp"

namespace gph {

void NlsParams::validate() const {
  if (p != 2 && p != 4)
    throw std::invalid_argument("nonlinearity exponent p must be 2 or 4");
  if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
  if (!(T >= 0)) throw std::invalid_argument("horizon must be non-negative");
}

namespace {

constexpr double kBlowupGuard = 1e6;

void nonlinear_phase(WaveFunction& phi, double tau, int p, double mu) {
  // e^{-i tau mu |phi|^p}, pointwise isometry
  for (auto& v : phi.values) {
    double a = std::abs(v);
    v *= std::polar(1.0, -tau * mu * std::pow(a, p));
  }
}

void free_flow(WaveFunction& phi, double tau) {
  TensorField f(phi.grid, 1);
  f.values() = std::move(phi.values);
  spectral::transform_all(f, -1, true);
  const auto& fs = phi.grid.freq_sq();
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] *= std::polar(1.0, -tau * fs[i]);
  spectral::transform_all(f, -1, false);
  phi.values = std::move(f.values());
}

}  // namespace

WaveFunction strang_step(const WaveFunction& phi, const NlsParams& params,
                         double dt) {
  WaveFunction out = phi;
  nonlinear_phase(out, 0.5 * dt, params.p, params.mu);
  free_flow(out, dt);
  nonlinear_phase(out, 0.5 * dt, params.p, params.mu);
  return out;
}

Trajectory evolve(const WaveFunction& phi0, const NlsParams& params,
                  int record_every) {
  params.validate();
  if (record_every < 1) record_every = 1;
  const int nsteps = static_cast<int>(std::llround(params.T / params.dt));
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(phi0);
  WaveFunction phi = phi0;
  for (int s = 1; s <= nsteps; ++s) {
    phi = strang_step(phi, params, params.dt);
    const double t = s * params.dt;
    if (!phi.finite())
      throw IntegrationError("non-finite field in NLS step", t);
    double amax = 0.0;
    for (const auto& v : phi.values) amax = std::max(amax, std::abs(v));
    if (amax > kBlowupGuard)
      throw IntegrationError("field amplitude exceeded blowup guard", t);
    if (s % record_every == 0 || s == nsteps) {
      traj.times.push_back(t);
      traj.states.push_back(phi);
    }
  }
  return traj;
}

double nls_energy(const WaveFunction& phi, const NlsParams& params) {
  double kin = 0.5 * kinetic_energy(phi);
  double pot = 0.0;
  for (const auto& v : phi.values)
    pot += std::pow(std::abs(v), params.p + 2);
  pot *= phi.grid.weight(1) * params.mu / (params.p + 2);
  return kin + pot;
}

}  // namespace gph

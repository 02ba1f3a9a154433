#pragma once

#include <functional>
#include <vector>

#include "gph/wavefunction.hpp"

namespace gph {

struct NlsParams {
  int p = 2;        // nonlinearity exponent, 2 (cubic) or 4 (quintic)
  double mu = 1.0;  // +1 defocusing, negative focusing
  double dt = 1e-3;
  double T = 1.0;

  void validate() const;
  int kp() const { return 1 + p / 2; }
};

// One Strang step for i d/dt phi = -Lap phi + mu |phi|^p phi:
// half nonlinear phase, exact free flow, half nonlinear phase.
// Both substeps are pointwise phase rotations, so mass is preserved to
// rounding.  dt may be negative.
WaveFunction strang_step(const WaveFunction& phi, const NlsParams& params,
                         double dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<WaveFunction> states;
};

// Repeated Strang steps over [0,T]; snapshot every `record_every` steps
// (the initial and final states are always recorded).  Throws
// IntegrationError on NaN/Inf or amplitude beyond 1e6.
Trajectory evolve(const WaveFunction& phi0, const NlsParams& params,
                  int record_every = 1);

// E_1 for a factorized state: 0.5*||grad phi||^2 + mu/(p+2) * int |phi|^(p+2)
double nls_energy(const WaveFunction& phi, const NlsParams& params);

}  // namespace gph

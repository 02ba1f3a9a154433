#pragma once

#include "gph/functionals.hpp"

namespace gph {

struct HierarchyStepStats {
  std::vector<double> herm_residual;  // per level, before re-enforcement
  std::vector<double> sym_residual;
};

// One step of the truncated p-GP hierarchy
//   i d/dt gamma^(k) = [-Lap, gamma^(k)] + mu B gamma^(k+p/2):
// half exact free flow, classical 4-stage interaction substep with freshly
// contracted inputs (the closure supplies the above-truncation level at the
// stage times), half free flow, then hermitize + symmetrize.  The Oracle
// mixture inside `t` is advanced in lockstep by two half steps.
HierarchyStepStats hierarchy_step(HierarchyTruncation& t, double dt);

struct HierarchyDiagnostics {
  double t = 0.0;
  std::vector<double> trace_real;       // per level
  std::vector<double> herm_residual;    // per level, measured pre-enforcement
  std::vector<double> admiss_residual;  // level k vs k+1, size K-1
  std::vector<double> min_eig;          // per level
  std::vector<double> oracle_error;     // sup |gamma^(k) - oracle|, if Oracle
};

struct HierarchyRun {
  std::vector<HierarchyDiagnostics> series;
  HierarchyTruncation final_state;
};

HierarchyRun hierarchy_evolve(const HierarchyTruncation& t0, double dt,
                              double horizon, int cadence);

HierarchyDiagnostics hierarchy_diagnostics(
    const HierarchyTruncation& t, double time,
    const std::vector<double>& pre_herm_residual);

}  // namespace gph

#include "gph/hierarchy.hpp"

#include <cmath>

namespace gph {

namespace {

// exact free flow e^{-i tau (|u|^2 - |u'|^2)} on a level kernel
void free_flow_level(DenseMarginal& g, double tau) {
  TensorField& f = g.kernel();
  spectral::transform_kernel(f, g.order(), true);
  const auto& fs = g.grid().freq_sq();
  std::vector<cplx> fwd(fs.size()), bwd(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    fwd[i] = std::polar(1.0, -tau * fs[i]);
    bwd[i] = std::polar(1.0, +tau * fs[i]);
  }
  for (int a = 0; a < g.order(); ++a) {
    spectral::apply_arg_symbol(f, a, fwd);
    spectral::apply_arg_symbol(f, g.order() + a, bwd);
  }
  spectral::transform_kernel(f, g.order(), false);
}

MixtureState advance_mixture(const MixtureState& m, const NlsParams& params,
                             double dt) {
  MixtureState out = m;
  for (auto& phi : out.states) phi = strang_step(phi, params, dt);
  return out;
}

}  // namespace

namespace detail {

// forcing at the step start equals the previous step's end forcing; the
// evolve loop threads it through to halve the dense top-marginal builds
HierarchyStepStats step_with_cache(HierarchyTruncation& t, double dt,
                                   std::optional<DenseMarginal>& carry);

}  // namespace detail

HierarchyStepStats hierarchy_step(HierarchyTruncation& t, double dt) {
  std::optional<DenseMarginal> no_carry;
  return detail::step_with_cache(t, dt, no_carry);
}

HierarchyStepStats detail::step_with_cache(
    HierarchyTruncation& t, double dt, std::optional<DenseMarginal>& carry) {
  const int K = t.depth();
  const int half_p = t.p / 2;
  const NlsParams params{t.p, t.mu, std::abs(dt), 0.0};
  if (t.closure == ClosureTag::Oracle) {
    if (!t.oracle)
      throw std::invalid_argument("oracle closure without an oracle mixture");
    if (!(t.oracle->grid() == t.grid()))
      throw std::invalid_argument("oracle mixture grid mismatch");
  }

  for (auto& g : t.marginals) free_flow_level(g, 0.5 * dt);

  // closure forcing, contracted once per stage time
  std::vector<DenseMarginal> top_forcing;
  if (t.closure == ClosureTag::Oracle) {
    MixtureState mid = advance_mixture(*t.oracle, params, 0.5 * dt);
    MixtureState end = advance_mixture(mid, params, 0.5 * dt);
    top_forcing.push_back(
        carry ? std::move(*carry)
              : b_full(mixture_marginal(*t.oracle, K + half_p), K));
    top_forcing.push_back(b_full(mixture_marginal(mid, K + half_p), K));
    top_forcing.push_back(b_full(mixture_marginal(end, K + half_p), K));
    carry = top_forcing.back();
    t.oracle = end;
  }

  auto rhs = [&](const std::vector<DenseMarginal>& levels, int stage) {
    std::vector<DenseMarginal> out;
    out.reserve(K);
    for (int k = 1; k <= K; ++k) {
      DenseMarginal dgdt(t.grid(), k);
      if (k + half_p <= K) {
        dgdt = b_full(levels[k + half_p - 1], k);
      } else if (t.closure == ClosureTag::Oracle) {
        dgdt = top_forcing[stage];
      }
      dgdt.kernel() *= cplx{0.0, -t.mu};  // i d/dt gamma = mu B gamma
      out.push_back(std::move(dgdt));
    }
    return out;
  };

  auto staged = [&](const std::vector<DenseMarginal>& base,
                    const std::vector<DenseMarginal>& slope, double c) {
    std::vector<DenseMarginal> out = base;
    for (int k = 0; k < K; ++k) out[k].kernel().axpy(c, slope[k].kernel());
    return out;
  };

  auto k1 = rhs(t.marginals, 0);
  auto k2 = rhs(staged(t.marginals, k1, 0.5 * dt), 1);
  auto k3 = rhs(staged(t.marginals, k2, 0.5 * dt), 1);
  auto k4 = rhs(staged(t.marginals, k3, dt), 2);
  for (int k = 0; k < K; ++k) {
    t.marginals[k].kernel().axpy(dt / 6.0, k1[k].kernel());
    t.marginals[k].kernel().axpy(dt / 3.0, k2[k].kernel());
    t.marginals[k].kernel().axpy(dt / 3.0, k3[k].kernel());
    t.marginals[k].kernel().axpy(dt / 6.0, k4[k].kernel());
  }

  for (auto& g : t.marginals) free_flow_level(g, 0.5 * dt);

  HierarchyStepStats stats;
  for (auto& g : t.marginals) {
    stats.herm_residual.push_back(g.hermiticity_residual());
    stats.sym_residual.push_back(symmetry_residual(g));
    g.hermitize();
    if (g.order() > 1) g = symmetrize(g);
    if (!g.kernel().finite())
      throw IntegrationError("non-finite hierarchy kernel", 0.0);
  }
  return stats;
}

HierarchyDiagnostics hierarchy_diagnostics(
    const HierarchyTruncation& t, double time,
    const std::vector<double>& pre_herm_residual) {
  HierarchyDiagnostics d;
  d.t = time;
  for (int k = 1; k <= t.depth(); ++k) {
    d.trace_real.push_back(t.level(k).trace().real());
    d.herm_residual.push_back(
        k <= static_cast<int>(pre_herm_residual.size())
            ? pre_herm_residual[k - 1]
            : t.level(k).hermiticity_residual());
  }
  d.admiss_residual = check_admissible(t).deviation;
  for (int k = 1; k <= t.depth(); ++k)
    d.min_eig.push_back(check_positive(t.level(k)).min_eigenvalue);
  if (t.closure == ClosureTag::Oracle) {
    for (int k = 1; k <= t.depth(); ++k)
      d.oracle_error.push_back(
          sup_distance(t.level(k), mixture_marginal(*t.oracle, k)));
  }
  return d;
}

HierarchyRun hierarchy_evolve(const HierarchyTruncation& t0, double dt,
                              double horizon, int cadence) {
  if (!(dt > 0)) throw std::invalid_argument("hierarchy step must be > 0");
  if (cadence < 1) cadence = 1;
  const int nsteps = static_cast<int>(std::llround(horizon / dt));

  HierarchyRun run;
  run.final_state = t0;
  run.series.push_back(hierarchy_diagnostics(t0, 0.0, {}));
  std::optional<DenseMarginal> carry;
  for (int s = 1; s <= nsteps; ++s) {
    HierarchyStepStats stats;
    try {
      stats = detail::step_with_cache(run.final_state, dt, carry);
    } catch (const IntegrationError&) {
      throw IntegrationError("hierarchy step failed", s * dt);
    }
    if (s % cadence == 0 || s == nsteps)
      run.series.push_back(hierarchy_diagnostics(run.final_state, s * dt,
                                                 stats.herm_residual));
  }
  return run;
}

}  // namespace gph

#pragma once

#include "gph/contraction.hpp"
#include "gph/nls.hpp"

namespace gph {

enum class NormKind { HilbertSchmidt, Trace };

// ||gamma^(k)||_{H^alpha_k} = (Tr |S^(k,alpha) gamma|^2)^(1/2):
// multiply by prod <xi_j>^alpha <xi'_j>^alpha, quadrature Frobenius norm.
double hs_sobolev_norm(const DenseMarginal& g, double alpha);

// ||gamma^(k)||_{h^alpha_k} = Tr |S^(k,alpha) gamma|: sum of singular values
// of the matricized multiplied kernel (eigenvalue magnitudes when hermitian).
double trace_sobolev_norm(const DenseMarginal& g, double alpha);

// Tr(S^(k,alpha) gamma) without absolute value (equals the trace norm for
// positive kernels); cheap diagonal sum in Fourier space.
double sobolev_trace(const DenseMarginal& g, double alpha);

struct XiNormResult {
  double value = 0.0;
  double tail_bound = 0.0;  // geometric estimate beyond the last term
  bool divergent = false;
  int divergent_component = -1;  // offending j when divergent
};

// sum_k xi^k ||gamma^(k)|| for a mixture.  Trace kind has the closed form
// sum_j mu_j * xi s_j / (1 - xi s_j) with s_j = ||<D>^alpha phi_j||^2;
// K_max truncates the series (0 = closed form / machine-precision cutoff).
XiNormResult xi_sequence_norm(const MixtureState& gamma, double xi,
                              double alpha, NormKind kind, int K_max = 0);
// finite-truncation variant over dense marginals
XiNormResult xi_sequence_norm(const HierarchyTruncation& t, double xi,
                              double alpha, NormKind kind);

// average energy per particle, sum_j mu_j E_1(phi_j)
double e1(const MixtureState& gamma, const NlsParams& params);

enum class EnergyPath { LowRank, Dense };

struct EnergyReport {
  int m = 1;
  double value = 0.0;
  EnergyPath path = EnergyPath::LowRank;
  double t = 0.0;
};

// <K^(m)> = Tr(K_1 K_{kp+1} ... K_{(m-1)kp+1} gamma^(m kp)).
// Low-rank closed form: sum_j mu_j (1/2 + E_1(phi_j))^m.
EnergyReport k_energy(const MixtureState& gamma, int m,
                      const NlsParams& params, double t = 0.0);
// dense path: gamma must have order m*kp
EnergyReport k_energy_dense(const DenseMarginal& g, int m,
                            const NlsParams& params, double t = 0.0);

struct KSeriesResult {
  double value = 0.0;
  double tail_bound = 0.0;
  bool decaying = true;
  int terms = 0;
};

// sum_m scale^m <K^(m)> with geometric tail estimate from the last ratio
KSeriesResult k_series(const MixtureState& gamma, double scale, int M_max,
                       const NlsParams& params);

struct DFactorResult {
  double value = 0.0;          // 1 - |mu| C0 / (1 - 4^-(1-alpha*kp))
  double mu_threshold = 0.0;   // admissible |mu| bound
};

// requires alpha*kp < 1 (L^2-subcritical window) and alpha > (kp-1)d/(2 kp)
DFactorResult d_factor(double alpha, int p, int d, double mu, double c0);

// Conservation-proof diagnostics: the four traces built from the splitting
// K_1 = K_1^(1) + K_1^(2) applied to the kinetic (h) and interaction (b)
// parts of the flow at level kp.  The identities
//   A_h1 = 0,   A_h2 + mu*A_b1 = 0,   A_b2 = 0
// hold exactly on the torus; residuals measure discretization noise.
struct CancellationReport {
  cplx a_h1, a_b1, a_h2, a_b2;
  double scale = 0.0;        // largest constituent magnitude
  double r_h1 = 0.0;         // |A_h1|
  double r_mixed = 0.0;      // |A_h2 + mu A_b1|
  double r_b2 = 0.0;         // |A_b2|
};

// g_kp: order kp; g_big: order 2kp-1, admissible-consistent and
// bosonic-symmetric (rejected otherwise, tolerance `sym_tol`)
CancellationReport cancellation_terms(const DenseMarginal& g_kp,
                                      const DenseMarginal& g_big, int p,
                                      double mu, double sym_tol = 1e-8);

// same, restricted to the frequency cubes Q_r x Q_r' with r, r' integer
// translates in Z^{d(2kp-1)}.  The projector keeps the full slot-permutation
// orbit of the cube pair (multiset match per side), which preserves bosonic
// symmetry; the mixed identity fails on bare asymmetric cube pairs.  The
// level-kp input is recovered from the projected kernel by partial trace.
// Orbits partition the lattice, so summing one representative per orbit
// reproduces the global terms.
CancellationReport cube_restricted_terms(const DenseMarginal& g_big,
                                         std::span<const long> r,
                                         std::span<const long> r_prime, int p,
                                         double mu);

}  // namespace gph

#pragma once

#include <cstdint>

#include "gph/functionals.hpp"

namespace gph {

// Sample distribution for the inequality harness: independent
// complex-Gaussian Fourier coefficients damped by prod <xi_i>^-decay,
// normalized to unit L^2 mass.  Every tenth sample is a tensor power of a
// one-argument draw, so the recorded suprema also cover the rank-one states
// the density-matrix bounds reduce to.
struct SampleSpec {
  int q = 2;
  int d = 1;
  int n = 64;
  double L = 6.283185307179586476925287;
  double decay = 2.0;  // must exceed d/2
  std::uint64_t seed = 1;
  int count = 1000;

  void validate() const;
};

TensorField sample_function(const SampleSpec& spec, int index);

// L^2 norm over x of the total-diagonal restriction f(x,...,x)
double diagonal_restriction_norm(const TensorField& f);

// prod_i <grad_i>^alpha applied L^2 norm
double mixed_sobolev_norm(const TensorField& f, double alpha);

struct RatioRecord {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double alpha = 0.0;
  int sample = -1;
  bool in_regime = true;  // alpha above the (q-1)d/(2q) threshold
};

double alpha_threshold(int q, int d);  // (q-1)d/(2q)

// diagonal norm against ||f||_{H^alpha}
RatioRecord sobolev_ratio(const TensorField& f, double alpha, int sample = -1);
// diagonal norm against ||f||_{H^1}^alpha ||f||_{L^2}^(1-alpha)
RatioRecord gn_ratio(const TensorField& f, double alpha, int sample = -1);

struct ConstantFit {
  std::vector<double> alphas;
  std::vector<double> eps;     // alpha - alpha0
  std::vector<double> c_hat;   // max sampled ratio per alpha
  double slope = 0.0;          // log c_hat vs log eps least squares
  int samples_per_alpha = 0;
};

// empirical constants on a grid of alphas above the threshold
ConstantFit estimate_constant(const SampleSpec& spec,
                              std::span<const double> alphas);

// empirical Sobolev constant at fixed alpha (max ratio over spec.count draws)
double measure_sobolev_constant(const SampleSpec& spec, double alpha);

struct DmGnRecord {
  double lhs = 0.0;    // Tr_1 B^+ gamma^(kp), the full-diagonal integral
  double rhs = 0.0;    // Tr(S^(kp,alpha) gamma^(kp))
  double ratio = 0.0;
  double alpha = 0.0;
};

DmGnRecord dm_gn_check(const DenseMarginal& g_kp, double alpha, int p);
DmGnRecord dm_gn_check(const MixtureState& gamma, double alpha, int p);

// Frequency-restriction ledger with the smooth LP family:
//   Tr(S^(kp,alpha) gamma) <= sum_j kp (1+2^2j)^(alpha kp) Tr(P_j gamma^(1)),
// plus the focusing lower bound 2 Tr(K_1 gamma) >= D Tr(S^(1,1) gamma^(1))
// evaluated with a measured C0.
struct FreqChainLedger {
  double lhs = 0.0;
  std::vector<double> band_terms;  // kp (1+2^2j)^(alpha kp) Tr(P_j gamma^(1))
  double rhs = 0.0;
  double k1_trace = 0.0;           // Tr(K_1 gamma^(kp))
  double s11_trace = 0.0;          // Tr(S^(1,1) gamma^(1))
  double d_value = 1.0;
  bool chain_holds = false;
  bool lower_bound_holds = false;
};

FreqChainLedger freq_restriction_chain(const DenseMarginal& g_kp, double alpha,
                                       int p, double mu, double c0_measured,
                                       double positivity_tol = 1e-8);

enum class Regime { Defocusing, FocusingL2Sub };

struct ChainSnapshot {
  double t = 0.0;
  double member1 = 0.0;  // ||Gamma(t)||_{h^1_xi}
  double member2 = 0.0;  // sum_m scale^m <K^(m)>_{Gamma(t)}
  double member3 = 0.0;  // ||Gamma_0||_{h^1_xi'}
  double slack12 = 0.0;
  double slack23 = 0.0;
  double middle_drift = 0.0;  // relative to t=0
  bool holds = false;
};

struct ChainReport {
  Regime regime = Regime::Defocusing;
  double xi = 0.0, xi_prime = 0.0;
  double d_value = 1.0;
  double series_scale = 0.0;
  bool xi_relation_ok = true;
  std::vector<ChainSnapshot> snapshots;
  bool all_hold = false;
  double max_middle_drift = 0.0;
};

// A priori bound chain along a mixture trajectory.  Defocusing: series scale
// 2 xi and xi <= (1 + 2/(p+2) c_sob)^(-1/kp) xi'.  Focusing L^2-subcritical:
// the energy series is evaluated at 2 xi / D and the admissible weight obeys
// xi <= D (1 + 2/(p+2) c_sob)^(-1/kp) xi'.  c_sob and c0 are measured
// constants (squared Sobolev-ratio form).
ChainReport bound_chain_check(const std::vector<MixtureState>& trajectory,
                              std::span<const double> times, double xi,
                              double xi_prime, const NlsParams& params,
                              Regime regime, double c_sob, double c0,
                              double alpha);

}  // namespace gph

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "gph/errors.hpp"
#include "gph/multiplier.hpp"
#include "gph/wavefunction.hpp"

namespace gph {

// Order-k marginal kernel gamma(x_1..x_k; x'_1..x'_k) as a dense tensor of
// 2k arguments, unprimed block first.  Immutable by convention after
// construction; operations return new values.
class DenseMarginal {
 public:
  DenseMarginal() = default;
  DenseMarginal(const Grid& g, int k);

  const Grid& grid() const { return field_.grid(); }
  int order() const { return k_; }
  TensorField& kernel() { return field_; }
  const TensorField& kernel() const { return field_; }

  // discrete trace dx^{dk} * sum over the full diagonal
  cplx trace() const;

  // max |gamma(x;x') - conj(gamma(x';x))|
  double hermiticity_residual() const;
  // swap-and-conjugate
  DenseMarginal adjoint() const;
  void hermitize();  // replace by (gamma + adjoint)/2

  double max_abs() const { return field_.max_abs(); }

 private:
  int k_ = 0;
  TensorField field_;
};

// gamma^(k) = (|phi><phi|)^{tensor k}; phi must have unit mass
DenseMarginal factorized_marginal(const WaveFunction& phi, int k);

// Positive-weighted superposition of factorized pure states.  Weights are
// normalized to sum to one on construction.
struct MixtureState {
  std::vector<double> weights;
  std::vector<WaveFunction> states;

  MixtureState() = default;
  MixtureState(std::vector<double> w, std::vector<WaveFunction> phis);

  std::size_t components() const { return weights.size(); }
  const Grid& grid() const { return states.at(0).grid; }
};

DenseMarginal mixture_marginal(const MixtureState& gamma, int k);

// trace out the last m primed/unprimed pairs (diagonal sum, weight dx^{dm})
DenseMarginal partial_trace(const DenseMarginal& g, int m);
// trace out an arbitrary slot set (0-based slot indices)
DenseMarginal partial_trace_slots(const DenseMarginal& g,
                                  std::span<const int> slots);

// average over S_k x S_k permutations of the unprimed/primed blocks
DenseMarginal symmetrize(const DenseMarginal& g);
double symmetry_residual(const DenseMarginal& g);  // max |gamma - sym(gamma)|

double check_hermitian(const DenseMarginal& g);

struct PositivityReport {
  double min_eigenvalue;
  bool estimated;  // true when the randomized path was used
};
// minimum eigenvalue of the matricized operator (weight dx^{dk} included).
// Full eigendecomposition up to side `eig_side_cap`; above that a seeded
// randomized estimate.
PositivityReport check_positive(const DenseMarginal& g,
                                int eig_side_cap = 4096);

// entrywise sup distance
double sup_distance(const DenseMarginal& a, const DenseMarginal& b);

// Finite hierarchy (gamma^(1),...,gamma^(K)) with a closure policy tag.
enum class ClosureTag { Zero, Oracle };

struct HierarchyTruncation {
  std::vector<DenseMarginal> marginals;  // orders 1..K
  int p = 2;
  double mu = 1.0;
  ClosureTag closure = ClosureTag::Zero;
  std::optional<MixtureState> oracle;  // closure source when Oracle

  int depth() const { return static_cast<int>(marginals.size()); }
  const Grid& grid() const { return marginals.at(0).grid(); }
  const DenseMarginal& level(int k) const { return marginals.at(k - 1); }
};

HierarchyTruncation truncation_from_mixture(const MixtureState& gamma, int K,
                                            int p, double mu,
                                            ClosureTag closure);

struct AdmissibilityReport {
  std::vector<double> deviation;  // level k: ||gamma^(k) - Tr gamma^(k+1)||_inf
  double max_deviation() const;
};
AdmissibilityReport check_admissible(const HierarchyTruncation& t);

// Binary snapshot: magic "GPH1", then d, n (little-endian int64) and L
// (little-endian float64), then the kernel row-major as float64 re/im pairs.
void write_snapshot(const DenseMarginal& g, const std::string& path);
DenseMarginal read_snapshot(const std::string& path);

}  // namespace gph

#pragma once

#include "gph/marginal.hpp"

namespace gph {

// Interaction operator B^+-_{j; k+1..k+p/2} mapping order k+p/2 to order k.
struct ContractionSpec {
  int p = 2;  // 2 or 4
  int j = 1;  // target slot, 1-based, 1 <= j <= k
  int k = 1;  // output order

  int input_order() const { return k + p / 2; }
  void validate() const;
};

// Delta kernels are realized as index pinning: the last p/2 unprimed and
// primed slots are evaluated at x_j (plus) or x'_j (minus).  Each delta pair
// cancels the dx-weight of one eliminated integral, so no grid factors
// appear; for a factorized state this makes Tr_1 B^+ gamma^(kp) equal
// int |phi|^(p+2).
DenseMarginal b_plus_dense(const DenseMarginal& g, const ContractionSpec& s);
DenseMarginal b_minus_dense(const DenseMarginal& g, const ContractionSpec& s);

// B gamma = sum_{j=1..k} (B^+_j - B^-_j) gamma
DenseMarginal b_full(const DenseMarginal& g, int k);

// generalized pinning used by the energy operators: pin `slots` (0-based)
// to slot `target`, on the unprimed (plus) or primed (minus) target column
DenseMarginal pin_slots(const DenseMarginal& g, int target,
                        std::span<const int> slots, bool plus);

// dx^d sum_x gamma(x,..,x;x,..,x), i.e. Tr_1(B^+_{1;2..k} gamma^(k))
cplx full_diagonal_trace(const DenseMarginal& g);
// 0.5 * Tr((1-Lap_{x1}) Tr_{2..k} gamma), the kinetic half of Tr(K_1 gamma)
cplx k1_kinetic_trace(const DenseMarginal& g);

// Tr(K_1 gamma^(kp)) = 0.5*Tr((1-Lap_{x1}) gamma^(1))
//                      + mu/(p+2) * Tr_1(B^+_{1;2..kp} gamma^(kp));
// equals 1/2 + E_1(phi) on a factorized state.
double k_op_trace(const DenseMarginal& g, int p, double mu);

// one energy-operator application K_l at 0-based slot `l`, removing slots
// l+1..l+p/2; input order must be at least l+1+p/2
DenseMarginal k_op_apply(const DenseMarginal& g, int l, int p, double mu);

}  // namespace gph

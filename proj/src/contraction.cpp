#include "gph/contraction.hpp"

#include <stdexcept>

namespace gph {

namespace {
std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}
}  // namespace

void ContractionSpec::validate() const {
  if (p != 2 && p != 4)
    throw std::invalid_argument("interaction order p must be 2 or 4");
  if (k < 1 || j < 1 || j > k)
    throw std::invalid_argument("contraction target j must satisfy 1<=j<=k");
}

DenseMarginal pin_slots(const DenseMarginal& g, int target,
                        std::span<const int> slots, bool plus) {
  const int k_in = g.order();
  const int m = static_cast<int>(slots.size());
  const int ko = k_in - m;
  if (ko < 1) throw std::invalid_argument("pinning would remove every slot");
  if (target < 0 || target >= ko)
    throw std::invalid_argument("pin target out of range");
  std::vector<bool> pinned(k_in, false);
  for (int s : slots) {
    if (s < 0 || s >= k_in)
      throw std::invalid_argument("pinned slot out of range");
    pinned[s] = true;
  }
  std::vector<int> kept;
  for (int s = 0; s < k_in; ++s)
    if (!pinned[s]) kept.push_back(s);
  if (static_cast<int>(kept.size()) != ko)
    throw std::invalid_argument("duplicate pinned slots");

  const Grid& grid = g.grid();
  const std::size_t N = grid.arg_points();
  std::vector<std::size_t> stride(2 * k_in);
  for (int a = 0; a < 2 * k_in; ++a) stride[a] = ipow(N, 2 * k_in - 1 - a);

  // both the unprimed and primed copies of each pinned slot are read at the
  // target value (x_target for plus, x'_target for minus)
  std::size_t pin_stride = 0;
  for (int s = 0; s < k_in; ++s)
    if (pinned[s]) pin_stride += stride[s] + stride[k_in + s];

  DenseMarginal out(grid, ko);
  std::vector<std::size_t> oidx(2 * ko, 0);
  const std::size_t osize = out.kernel().size();
  for (std::size_t of = 0; of < osize; ++of) {
    std::size_t rem = of;
    for (int a = 2 * ko - 1; a >= 0; --a) {
      oidx[a] = rem % N;
      rem /= N;
    }
    std::size_t f = 0;
    for (int a = 0; a < ko; ++a) f += oidx[a] * stride[kept[a]];
    for (int a = 0; a < ko; ++a) f += oidx[ko + a] * stride[k_in + kept[a]];
    const std::size_t z = plus ? oidx[target] : oidx[ko + target];
    out.kernel()[of] = g.kernel()[f + z * pin_stride];
  }
  return out;
}

namespace {
DenseMarginal b_signed(const DenseMarginal& g, const ContractionSpec& s,
                       bool plus) {
  s.validate();
  if (g.order() != s.input_order())
    throw std::invalid_argument("contraction input order mismatch: expected " +
                                std::to_string(s.input_order()) + ", got " +
                                std::to_string(g.order()));
  std::vector<int> slots(s.p / 2);
  for (int i = 0; i < s.p / 2; ++i) slots[i] = s.k + i;
  return pin_slots(g, s.j - 1, slots, plus);
}
}  // namespace

DenseMarginal b_plus_dense(const DenseMarginal& g, const ContractionSpec& s) {
  return b_signed(g, s, true);
}

DenseMarginal b_minus_dense(const DenseMarginal& g, const ContractionSpec& s) {
  return b_signed(g, s, false);
}

DenseMarginal b_full(const DenseMarginal& g, int k) {
  const int half_p = g.order() - k;
  if (half_p != 1 && half_p != 2)
    throw std::invalid_argument("b_full: input must have order k + p/2");
  const int p = 2 * half_p;
  DenseMarginal out(g.grid(), k);
  for (int j = 1; j <= k; ++j) {
    ContractionSpec s{p, j, k};
    out.kernel() += b_plus_dense(g, s).kernel();
    out.kernel() -= b_minus_dense(g, s).kernel();
  }
  return out;
}

cplx full_diagonal_trace(const DenseMarginal& g) {
  const std::size_t N = g.grid().arg_points();
  const int k = g.order();
  // flat stride of the all-equal diagonal: sum_a N^a over the 2k arguments
  std::size_t unit = 0;
  for (int a = 0; a < 2 * k; ++a) unit = unit * N + 1;
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < N; ++i) s += g.kernel()[i * unit];
  return s * g.grid().weight(1);
}

cplx k1_kinetic_trace(const DenseMarginal& g) {
  DenseMarginal g1 = g;
  if (g.order() > 1) {
    std::vector<int> slots(g.order() - 1);
    for (int i = 0; i < g.order() - 1; ++i) slots[i] = 1 + i;
    g1 = partial_trace_slots(g, slots);
  }
  TensorField f = g1.kernel();
  spectral::transform_kernel(f, 1, true);
  const std::size_t N = g1.grid().arg_points();
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < N; ++i)
    s += (1.0 + g1.grid().freq_sq()[i]) * f[i * N + i];
  return 0.5 * s;
}

double k_op_trace(const DenseMarginal& g, int p, double mu) {
  const int kp = 1 + p / 2;
  if (g.order() != kp)
    throw std::invalid_argument("k_op_trace expects a marginal of order kp");
  return k1_kinetic_trace(g).real() +
         mu / (p + 2) * full_diagonal_trace(g).real();
}

DenseMarginal k_op_apply(const DenseMarginal& g, int l, int p, double mu) {
  const int half_p = p / 2;
  if (l < 0 || l + half_p >= g.order())
    throw std::invalid_argument("k_op_apply: slot range out of bounds");
  std::vector<int> slots(half_p);
  for (int i = 0; i < half_p; ++i) slots[i] = l + 1 + i;

  DenseMarginal kin = partial_trace_slots(g, slots);
  // 0.5 (1 - Lap_{x_l}) on the reduced kernel
  TensorField& f = kin.kernel();
  int args[1] = {l};
  spectral::transform(f, args, -1, true);
  std::vector<double> sym(g.grid().arg_points());
  for (std::size_t i = 0; i < sym.size(); ++i)
    sym[i] = 0.5 * (1.0 + g.grid().freq_sq()[i]);
  spectral::apply_arg_symbol(f, l, sym);
  spectral::transform(f, args, -1, false);

  DenseMarginal pin = pin_slots(g, l, slots, true);
  kin.kernel().axpy(mu / (p + 2), pin.kernel());
  return kin;
}

}  // namespace gph

#include "gph/functionals.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace gph {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// multiply kernel by prod_j <xi_j>^alpha <xi'_j>^alpha
TensorField apply_s_alpha(const DenseMarginal& g, double alpha) {
  TensorField f = g.kernel();
  spectral::transform_kernel(f, g.order(), true);
  std::vector<double> sym(g.grid().arg_points());
  for (std::size_t i = 0; i < sym.size(); ++i)
    sym[i] = std::pow(1.0 + g.grid().freq_sq()[i], 0.5 * alpha);
  for (int a = 0; a < 2 * g.order(); ++a)
    spectral::apply_arg_symbol(f, a, sym);
  return f;  // Fourier side
}

Eigen::MatrixXcd matricize_fourier(const TensorField& fhat, int k, double w) {
  const std::size_t side = ipow(fhat.grid().arg_points(), k);
  Eigen::MatrixXcd M(side, side);
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c)
      M(r, c) = w * fhat[r * side + c];
  return M;
}

}  // namespace

double hs_sobolev_norm(const DenseMarginal& g, double alpha) {
  TensorField f = apply_s_alpha(g, alpha);
  // Parseval: quadrature Frobenius norm equals the coefficient sum
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]);
  return std::sqrt(s);
}

double trace_sobolev_norm(const DenseMarginal& g, double alpha) {
  TensorField f = apply_s_alpha(g, alpha);
  // coefficient-side matrix is unitarily equivalent to the weighted
  // space-side operator, so singular values agree with weight 1 here
  Eigen::MatrixXcd M = matricize_fourier(f, g.order(), 1.0);
  const double herm = (M - M.adjoint()).cwiseAbs().maxCoeff();
  if (herm < 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff())) {
    Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H,
                                                       Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigensolver failed in trace norm");
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues().sum();
}

double sobolev_trace(const DenseMarginal& g, double alpha) {
  TensorField f = g.kernel();
  spectral::transform_kernel(f, g.order(), true);
  const std::size_t N = g.grid().arg_points();
  const std::size_t side = ipow(N, g.order());
  double s = 0.0;
  std::vector<std::size_t> idx(g.order(), 0);
  for (std::size_t r = 0; r < side; ++r) {
    std::size_t rem = r;
    double w = 1.0;
    for (int a = g.order() - 1; a >= 0; --a) {
      std::size_t i = rem % N;
      rem /= N;
      w *= std::pow(1.0 + g.grid().freq_sq()[i], alpha);
    }
    s += w * f[r * side + r].real();
  }
  return s;
}

namespace {

// <Lambda^a phi_i, Lambda^a phi_j> Gram matrix
Eigen::MatrixXcd gram_alpha(const MixtureState& gamma, double alpha) {
  const std::size_t nc = gamma.components();
  std::vector<std::vector<cplx>> coeffs(nc);
  for (std::size_t j = 0; j < nc; ++j)
    coeffs[j] = fourier_coefficients(gamma.states[j]);
  const auto& fs = gamma.grid().freq_sq();
  Eigen::MatrixXcd G(nc, nc);
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = 0; j < nc; ++j) {
      cplx acc{0.0, 0.0};
      for (std::size_t s = 0; s < fs.size(); ++s)
        acc += std::pow(1.0 + fs[s], alpha) * std::conj(coeffs[i][s]) *
               coeffs[j][s];
      G(i, j) = acc;
    }
  return G;
}

double mixture_norm_k(const Eigen::MatrixXcd& G,
                      const std::vector<double>& w, int k, NormKind kind) {
  const std::size_t nc = w.size();
  if (kind == NormKind::Trace) {
    // S gamma_j S are positive, so the trace norm is the plain trace
    double s = 0.0;
    for (std::size_t j = 0; j < nc; ++j)
      s += w[j] * std::pow(G(j, j).real(), k);
    return s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      s += w[i] * w[j] * std::pow(std::abs(G(i, j)), 2 * k);
  return std::sqrt(s);
}

}  // namespace

XiNormResult xi_sequence_norm(const MixtureState& gamma, double xi,
                              double alpha, NormKind kind, int K_max) {
  if (!(xi > 0.0 && xi < 1.0))
    throw std::invalid_argument("sequence weight xi must lie in (0,1)");
  XiNormResult res;
  Eigen::MatrixXcd G = gram_alpha(gamma, alpha);
  for (std::size_t j = 0; j < gamma.components(); ++j) {
    if (xi * G(j, j).real() >= 1.0) {
      res.divergent = true;
      res.divergent_component = static_cast<int>(j);
      return res;
    }
  }
  if (kind == NormKind::Trace && K_max <= 0) {
    // closed form sum_j w_j * xi s_j / (1 - xi s_j)
    for (std::size_t j = 0; j < gamma.components(); ++j) {
      double xs = xi * G(j, j).real();
      res.value += gamma.weights[j] * xs / (1.0 - xs);
    }
    return res;
  }
  double rmax = 0.0;
  for (std::size_t j = 0; j < gamma.components(); ++j)
    rmax = std::max(rmax, xi * G(j, j).real());
  int K = K_max;
  if (K <= 0) {
    // run until the geometric tail drops below machine noise
    K = 1;
    double term = rmax;
    while (term > 1e-18 && K < 4000) {
      term *= rmax;
      ++K;
    }
  }
  double last = 0.0;
  for (int k = 1; k <= K; ++k) {
    last = std::pow(xi, k) * mixture_norm_k(G, gamma.weights, k, kind);
    res.value += last;
  }
  res.tail_bound = rmax < 1.0 ? last * rmax / (1.0 - rmax) : 0.0;
  return res;
}

XiNormResult xi_sequence_norm(const HierarchyTruncation& t, double xi,
                              double alpha, NormKind kind) {
  if (!(xi > 0.0 && xi < 1.0))
    throw std::invalid_argument("sequence weight xi must lie in (0,1)");
  XiNormResult res;
  double prev = 0.0, last = 0.0;
  for (int k = 1; k <= t.depth(); ++k) {
    double nk = kind == NormKind::Trace
                    ? trace_sobolev_norm(t.level(k), alpha)
                    : hs_sobolev_norm(t.level(k), alpha);
    prev = last;
    last = std::pow(xi, k) * nk;
    res.value += last;
  }
  if (prev > 0.0 && last < prev) {
    double r = last / prev;
    res.tail_bound = last * r / (1.0 - r);
  } else if (last > 0.0) {
    res.divergent = true;
  }
  return res;
}

double e1(const MixtureState& gamma, const NlsParams& params) {
  double s = 0.0;
  for (std::size_t j = 0; j < gamma.components(); ++j)
    s += gamma.weights[j] * nls_energy(gamma.states[j], params);
  return s;
}

EnergyReport k_energy(const MixtureState& gamma, int m,
                      const NlsParams& params, double t) {
  if (m < 1) throw std::invalid_argument("energy order m must be >= 1");
  double s = 0.0;
  for (std::size_t j = 0; j < gamma.components(); ++j)
    s += gamma.weights[j] *
         std::pow(0.5 + nls_energy(gamma.states[j], params), m);
  return {m, s, EnergyPath::LowRank, t};
}

EnergyReport k_energy_dense(const DenseMarginal& g, int m,
                            const NlsParams& params, double t) {
  const int kp = params.kp();
  if (g.order() != m * kp)
    throw std::invalid_argument("dense energy path expects order m*kp");
  DenseMarginal cur = g;
  for (int block = m - 1; block >= 0; --block)
    cur = k_op_apply(cur, block * kp, params.p, params.mu);
  // remaining slots are the m block heads; trace them out
  cplx val = cur.trace();
  return {m, val.real(), EnergyPath::Dense, t};
}

KSeriesResult k_series(const MixtureState& gamma, double scale, int M_max,
                       const NlsParams& params) {
  if (M_max < 2) throw std::invalid_argument("series needs M_max >= 2");
  KSeriesResult res;
  res.terms = M_max;
  double prev = 0.0, last = 0.0;
  for (int m = 1; m <= M_max; ++m) {
    prev = last;
    last = std::pow(scale, m) * k_energy(gamma, m, params).value;
    res.value += last;
  }
  if (last > prev) {
    res.decaying = false;
    return res;
  }
  const double r = prev > 0.0 ? last / prev : 0.0;
  res.tail_bound = r < 1.0 ? last * r / (1.0 - r) : 0.0;
  return res;
}

DFactorResult d_factor(double alpha, int p, int d, double mu, double c0) {
  const int kp = 1 + p / 2;
  (void)d;  // the restriction threshold (kp-1)d/(2kp) is the caller's regime
  if (!(alpha * kp < 1.0))
    throw std::invalid_argument(
        "d_factor requires alpha*kp < 1 (L2-subcritical window)");
  if (!(c0 >= 0.0)) throw std::invalid_argument("c0 must be non-negative");
  const double denom = 1.0 - std::pow(4.0, -(1.0 - alpha * kp));
  DFactorResult res;
  res.mu_threshold = c0 > 0.0 ? denom / c0
                              : std::numeric_limits<double>::infinity();
  res.value = 1.0 - std::abs(mu) * c0 / denom;
  return res;
}

namespace {

// h_1^{pm} at the first block: -(sum over the block) (Lap_xj - Lap_x'j)
DenseMarginal h_block(const DenseMarginal& g, int block_len) {
  TensorField f = g.kernel();
  spectral::transform_kernel(f, g.order(), true);
  const std::size_t N = g.grid().arg_points();
  const std::size_t size = f.size();
  const int args = 2 * g.order();
  std::vector<std::size_t> stride(args);
  for (int a = 0; a < args; ++a) stride[a] = ipow(N, args - 1 - a);
  DenseMarginal out(g.grid(), g.order());
  TensorField& o = out.kernel();
  const auto& fs = g.grid().freq_sq();
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t rem = i;
    double sym = 0.0;
    for (int a = args - 1; a >= 0; --a) {
      std::size_t ii = rem % N;
      rem /= N;
      if (a < block_len)
        sym += fs[ii];
      else if (a >= g.order() && a < g.order() + block_len)
        sym -= fs[ii];
    }
    o[i] = sym * f[i];
  }
  spectral::transform_kernel(o, g.order(), false);
  return out;
}

// b_1^{pm}: sum_{j=1..kp} (B+_j - B-_j) pinning the trailing p/2 slots
DenseMarginal b_block(const DenseMarginal& g_big, int kp) {
  const int k_in = g_big.order();
  std::vector<int> slots(k_in - kp);
  for (int i = 0; i < k_in - kp; ++i) slots[i] = kp + i;
  DenseMarginal out(g_big.grid(), kp);
  for (int j = 0; j < kp; ++j) {
    out.kernel() += pin_slots(g_big, j, slots, true).kernel();
    out.kernel() -= pin_slots(g_big, j, slots, false).kernel();
  }
  return out;
}

CancellationReport cancellation_core(const DenseMarginal& g_kp,
                                     const DenseMarginal& g_big, int p,
                                     double mu) {
  const int kp = 1 + p / 2;
  CancellationReport rep;
  DenseMarginal hg = h_block(g_kp, kp);
  DenseMarginal bg = b_block(g_big, kp);
  rep.a_h1 = k1_kinetic_trace(hg);
  rep.a_b1 = k1_kinetic_trace(bg);
  rep.a_h2 = mu / (p + 2) * full_diagonal_trace(hg);
  rep.a_b2 = mu / (p + 2) * full_diagonal_trace(bg);
  rep.scale = std::max({std::abs(rep.a_h2), std::abs(mu * rep.a_b1),
                        std::abs(rep.a_b1), std::abs(rep.a_h1)});
  rep.r_h1 = std::abs(rep.a_h1);
  rep.r_mixed = std::abs(rep.a_h2 + mu * rep.a_b1);
  rep.r_b2 = std::abs(rep.a_b2);
  return rep;
}

}  // namespace

CancellationReport cancellation_terms(const DenseMarginal& g_kp,
                                      const DenseMarginal& g_big, int p,
                                      double mu, double sym_tol) {
  const int kp = 1 + p / 2;
  if (g_kp.order() != kp || g_big.order() != 2 * kp - 1)
    throw std::invalid_argument(
        "cancellation terms need orders kp and 2kp-1");
  const double scale = std::max(1e-300, g_big.max_abs());
  if (symmetry_residual(g_big) > sym_tol * scale ||
      symmetry_residual(g_kp) > sym_tol * std::max(1e-300, g_kp.max_abs()))
    throw std::invalid_argument(
        "cancellation terms require bosonic-symmetric inputs");
  DenseMarginal reduced = partial_trace(g_big, kp - 1);
  if (sup_distance(reduced, g_kp) > sym_tol * scale)
    throw std::invalid_argument(
        "cancellation terms require admissible-consistent inputs");
  return cancellation_core(g_kp, g_big, p, mu);
}

namespace {

// sorted per-slot cube ids for one side of a kernel entry
std::vector<std::vector<long>> cube_multiset(std::span<const long> r, int big,
                                             int d) {
  std::vector<std::vector<long>> ms(big);
  for (int a = 0; a < big; ++a)
    ms[a].assign(r.begin() + a * d, r.begin() + (a + 1) * d);
  std::sort(ms.begin(), ms.end());
  return ms;
}

}  // namespace

CancellationReport cube_restricted_terms(const DenseMarginal& g_big,
                                         std::span<const long> r,
                                         std::span<const long> r_prime, int p,
                                         double mu) {
  const int kp = 1 + p / 2;
  const int big = 2 * kp - 1;
  const int d = g_big.grid().dim();
  if (g_big.order() != big)
    throw std::invalid_argument("cube restriction expects order 2kp-1");
  if (static_cast<int>(r.size()) != d * big ||
      static_cast<int>(r_prime.size()) != d * big)
    throw std::invalid_argument("cube index must have d*(2kp-1) components");

  // Bosonic symmetry enters the mixed cancellation, so the projector keeps
  // the whole slot-permutation orbit of (Q_r, Q_r'): an entry passes when
  // its per-slot cube ids match the requested ones as a multiset.  Orbits
  // partition the lattice, so summing representatives recovers the global
  // terms.
  const auto want_u = cube_multiset(r, big, d);
  const auto want_p = cube_multiset(r_prime, big, d);

  const Grid& grid = g_big.grid();
  const int n = grid.points();
  const std::size_t N = grid.arg_points();
  // per-argument cube id (one d-vector per lattice point)
  std::vector<std::vector<long>> arg_cube(N);
  for (std::size_t s = 0; s < N; ++s) {
    std::size_t rem = s;
    std::vector<long> c(d);
    for (int ax = d - 1; ax >= 0; --ax) {
      c[ax] = static_cast<long>(
          std::floor(grid.freq(static_cast<int>(rem % n))));
      rem /= n;
    }
    arg_cube[s] = std::move(c);
  }

  TensorField f = g_big.kernel();
  spectral::transform_kernel(f, big, true);
  std::vector<std::vector<long>> got(big);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    std::size_t rem = flat;
    std::size_t sub[16];
    for (int a = 2 * big - 1; a >= 0; --a) {
      sub[a] = rem % N;
      rem /= N;
    }
    for (int a = 0; a < big; ++a) got[a] = arg_cube[sub[a]];
    std::sort(got.begin(), got.end());
    bool keep = got == want_u;
    if (keep) {
      for (int a = 0; a < big; ++a) got[a] = arg_cube[sub[big + a]];
      std::sort(got.begin(), got.end());
      keep = got == want_p;
    }
    if (!keep) f[flat] = cplx{0.0, 0.0};
  }
  spectral::transform_kernel(f, big, false);
  DenseMarginal gb(g_big.grid(), big);
  gb.kernel() = std::move(f);

  DenseMarginal gk = partial_trace(gb, kp - 1);
  return cancellation_core(gk, gb, p, mu);
}

}  // namespace gph

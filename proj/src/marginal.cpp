#include "gph/marginal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>

#include "gph/rng.hpp"

namespace gph {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::vector<std::vector<int>> permutations(int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

DenseMarginal::DenseMarginal(const Grid& g, int k) : k_(k), field_(g, 2 * k) {
  if (k < 1) throw std::invalid_argument("marginal order must be >= 1");
}

cplx DenseMarginal::trace() const {
  const std::size_t N = grid().arg_points();
  const std::size_t side = ipow(N, k_);
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < side; ++i) s += field_[i * side + i];
  return s * grid().weight(k_);
}

DenseMarginal DenseMarginal::adjoint() const {
  const std::size_t N = grid().arg_points();
  const std::size_t side = ipow(N, k_);
  DenseMarginal out(grid(), k_);
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c)
      out.field_[r * side + c] = std::conj(field_[c * side + r]);
  return out;
}

double DenseMarginal::hermiticity_residual() const {
  const std::size_t N = grid().arg_points();
  const std::size_t side = ipow(N, k_);
  double m = 0.0;
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = r; c < side; ++c)
      m = std::max(m, std::abs(field_[r * side + c] -
                               std::conj(field_[c * side + r])));
  return m;
}

void DenseMarginal::hermitize() {
  const std::size_t N = grid().arg_points();
  const std::size_t side = ipow(N, k_);
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = r; c < side; ++c) {
      cplx a = field_[r * side + c];
      cplx b = std::conj(field_[c * side + r]);
      cplx avg = 0.5 * (a + b);
      field_[r * side + c] = avg;
      field_[c * side + r] = std::conj(avg);
    }
}

DenseMarginal factorized_marginal(const WaveFunction& phi, int k) {
  if (std::abs(phi.mass() - 1.0) > 1e-12)
    throw std::invalid_argument(
        "factorized marginal requires a unit-mass state");
  const Grid& g = phi.grid;
  const std::size_t N = g.arg_points();
  check_capacity(ipow(N, 2 * k));
  // tensor power T = phi^{(x) k}, then kernel = T (x) conj(T)
  std::vector<cplx> T(1, cplx{1.0, 0.0});
  for (int j = 0; j < k; ++j) {
    std::vector<cplx> next(T.size() * N);
    std::size_t idx = 0;
    for (const cplx& t : T)
      for (std::size_t s = 0; s < N; ++s) next[idx++] = t * phi.values[s];
    T = std::move(next);
  }
  DenseMarginal out(g, k);
  const std::size_t side = T.size();
  for (std::size_t r = 0; r < side; ++r) {
    const cplx tr = T[r];
    cplx* row = out.kernel().data() + r * side;
    for (std::size_t c = 0; c < side; ++c) row[c] = tr * std::conj(T[c]);
  }
  return out;
}

MixtureState::MixtureState(std::vector<double> w,
                           std::vector<WaveFunction> phis)
    : weights(std::move(w)), states(std::move(phis)) {
  if (weights.empty() || weights.size() != states.size())
    throw std::invalid_argument("mixture needs matching weights and states");
  double sum = 0.0;
  for (double x : weights) {
    if (!(x > 0)) throw std::invalid_argument("mixture weights must be > 0");
    sum += x;
  }
  for (double& x : weights) x /= sum;
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (!(states[j].grid == states[0].grid))
      throw std::invalid_argument("mixture states must share one grid");
    if (std::abs(states[j].mass() - 1.0) > 1e-12)
      throw std::invalid_argument("mixture component " + std::to_string(j) +
                                  " is not unit mass");
  }
}

DenseMarginal mixture_marginal(const MixtureState& gamma, int k) {
  if (gamma.components() == 1)
    return factorized_marginal(gamma.states[0], k);
  DenseMarginal out(gamma.grid(), k);
  for (std::size_t j = 0; j < gamma.components(); ++j) {
    DenseMarginal part = factorized_marginal(gamma.states[j], k);
    out.kernel().axpy(gamma.weights[j], part.kernel());
  }
  return out;
}

DenseMarginal partial_trace_slots(const DenseMarginal& g,
                                  std::span<const int> slots) {
  const int k = g.order();
  const int m = static_cast<int>(slots.size());
  if (m >= k)
    throw std::invalid_argument("cannot trace away every slot");
  for (int s : slots)
    if (s < 0 || s >= k) throw std::invalid_argument("trace slot out of range");

  const Grid& grid = g.grid();
  const std::size_t N = grid.arg_points();
  std::vector<bool> traced(k, false);
  for (int s : slots) traced[s] = true;

  std::vector<int> kept;
  for (int s = 0; s < k; ++s)
    if (!traced[s]) kept.push_back(s);
  const int ko = k - m;

  // input argument strides (2k args)
  std::vector<std::size_t> stride(2 * k);
  for (int a = 0; a < 2 * k; ++a) stride[a] = ipow(N, 2 * k - 1 - a);

  DenseMarginal out(grid, ko);
  std::vector<std::size_t> oidx(2 * ko, 0);
  const std::size_t osize = out.kernel().size();
  for (std::size_t of = 0; of < osize; ++of) {
    // decode output index
    std::size_t rem = of;
    for (int a = 2 * ko - 1; a >= 0; --a) {
      oidx[a] = rem % N;
      rem /= N;
    }
    std::size_t base = 0;
    for (int a = 0; a < ko; ++a) base += oidx[a] * stride[kept[a]];
    for (int a = 0; a < ko; ++a) base += oidx[ko + a] * stride[k + kept[a]];

    // diagonal sum over traced slots
    cplx acc{0.0, 0.0};
    std::vector<std::size_t> didx(m, 0);
    while (true) {
      std::size_t f = base;
      for (int t = 0; t < m; ++t)
        f += didx[t] * (stride[slots[t]] + stride[k + slots[t]]);
      acc += g.kernel()[f];
      int t = m - 1;
      while (t >= 0 && ++didx[t] == N) didx[t--] = 0;
      if (t < 0) break;
    }
    out.kernel()[of] = acc * grid.weight(m);
  }
  return out;
}

DenseMarginal partial_trace(const DenseMarginal& g, int m) {
  if (m < 1 || m >= g.order())
    throw std::invalid_argument("partial trace count must be in [1, k)");
  std::vector<int> slots(m);
  for (int i = 0; i < m; ++i) slots[i] = g.order() - m + i;
  return partial_trace_slots(g, slots);
}

DenseMarginal symmetrize(const DenseMarginal& g) {
  const int k = g.order();
  const Grid& grid = g.grid();
  const std::size_t N = grid.arg_points();
  const auto perms = permutations(k);
  std::vector<std::size_t> stride(2 * k);
  for (int a = 0; a < 2 * k; ++a) stride[a] = ipow(N, 2 * k - 1 - a);

  DenseMarginal out(grid, k);
  const std::size_t size = g.kernel().size();
  std::vector<std::size_t> idx(2 * k, 0);
  const double w = 1.0 / (perms.size() * perms.size());
  for (std::size_t f = 0; f < size; ++f) {
    std::size_t rem = f;
    for (int a = 2 * k - 1; a >= 0; --a) {
      idx[a] = rem % N;
      rem /= N;
    }
    cplx acc{0.0, 0.0};
    for (const auto& pu : perms) {
      std::size_t part = 0;
      for (int a = 0; a < k; ++a) part += idx[pu[a]] * stride[a];
      for (const auto& pp : perms) {
        std::size_t f2 = part;
        for (int a = 0; a < k; ++a) f2 += idx[k + pp[a]] * stride[k + a];
        acc += g.kernel()[f2];
      }
    }
    out.kernel()[f] = acc * w;
  }
  return out;
}

double symmetry_residual(const DenseMarginal& g) {
  if (g.order() == 1) return 0.0;
  DenseMarginal s = symmetrize(g);
  return sup_distance(g, s);
}

double check_hermitian(const DenseMarginal& g) {
  return g.hermiticity_residual();
}

namespace {

Eigen::MatrixXcd matricize(const DenseMarginal& g) {
  const std::size_t side =
      ipow(g.grid().arg_points(), g.order());
  const double w = g.grid().weight(g.order());
  Eigen::MatrixXcd M(side, side);
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c)
      M(r, c) = w * g.kernel()[r * side + c];
  return M;
}

// seeded power iteration on c*I - M for the smallest eigenvalue
double randomized_min_eig(const DenseMarginal& g) {
  const std::size_t N = g.grid().arg_points();
  const std::size_t side = ipow(N, g.order());
  const double w = g.grid().weight(g.order());
  const cplx* ker = g.kernel().data();

  double frob = 0.0;
  for (std::size_t i = 0; i < side * side; ++i) frob += std::norm(ker[i]);
  const double shift = w * std::sqrt(frob) + 1.0;

  Rng rng(20240901);
  std::vector<cplx> v(side), y(side);
  for (auto& x : v) x = rng.cgaussian();
  double lam = 0.0;
  for (int it = 0; it < 300; ++it) {
    // y = (shift*I - M) v
    for (std::size_t r = 0; r < side; ++r) {
      cplx acc{0.0, 0.0};
      const cplx* row = ker + r * side;
      for (std::size_t c = 0; c < side; ++c) acc += row[c] * v[c];
      y[r] = shift * v[r] - w * acc;
    }
    double nrm = 0.0;
    for (const auto& x : y) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < side; ++i) v[i] = y[i] / nrm;
    lam = nrm;
  }
  return shift - lam;
}

}  // namespace

PositivityReport check_positive(const DenseMarginal& g, int eig_side_cap) {
  const std::size_t side = ipow(g.grid().arg_points(), g.order());
  if (side > static_cast<std::size_t>(eig_side_cap))
    return {randomized_min_eig(g), true};
  Eigen::MatrixXcd M = matricize(g);
  Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed in positivity check");
  return {es.eigenvalues().minCoeff(), false};
}

double sup_distance(const DenseMarginal& a, const DenseMarginal& b) {
  if (a.order() != b.order() || !(a.grid() == b.grid()))
    throw std::invalid_argument("marginal shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.kernel().size(); ++i)
    m = std::max(m, std::abs(a.kernel()[i] - b.kernel()[i]));
  return m;
}

HierarchyTruncation truncation_from_mixture(const MixtureState& gamma, int K,
                                            int p, double mu,
                                            ClosureTag closure) {
  if (K < 1) throw std::invalid_argument("truncation depth must be >= 1");
  HierarchyTruncation t;
  t.p = p;
  t.mu = mu;
  t.closure = closure;
  if (closure == ClosureTag::Oracle) t.oracle = gamma;
  for (int k = 1; k <= K; ++k)
    t.marginals.push_back(mixture_marginal(gamma, k));
  return t;
}

double AdmissibilityReport::max_deviation() const {
  double m = 0.0;
  for (double d : deviation) m = std::max(m, d);
  return m;
}

AdmissibilityReport check_admissible(const HierarchyTruncation& t) {
  AdmissibilityReport rep;
  for (int k = 1; k < t.depth(); ++k) {
    DenseMarginal reduced = partial_trace(t.level(k + 1), 1);
    rep.deviation.push_back(sup_distance(t.level(k), reduced));
  }
  return rep;
}

namespace {
void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
  os.write(reinterpret_cast<const char*>(b), 8);
}
std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}
void put_f64(std::ostream& os, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  put_u64(os, v);
}
double get_f64(std::istream& is) {
  std::uint64_t v = get_u64(is);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}
}  // namespace

void write_snapshot(const DenseMarginal& g, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open snapshot file " + path);
  os.write("GPH1", 4);
  put_u64(os, static_cast<std::uint64_t>(g.grid().dim()));
  put_u64(os, static_cast<std::uint64_t>(g.grid().points()));
  put_f64(os, g.grid().length());
  for (const cplx& v : g.kernel().values()) {
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
  if (!os) throw std::runtime_error("snapshot write failed: " + path);
}

DenseMarginal read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open snapshot file " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "GPH1")
    throw std::runtime_error("bad snapshot magic in " + path);
  const int d = static_cast<int>(get_u64(is));
  const int n = static_cast<int>(get_u64(is));
  const double L = get_f64(is);
  Grid g = make_grid(d, n, L);

  is.seekg(0, std::ios::end);
  const std::size_t payload = static_cast<std::size_t>(is.tellg()) - 28;
  const std::size_t entries = payload / 16;
  // order recovered from the entry count n^(2dk)
  int k = 0;
  std::size_t sz = 1;
  const std::size_t N = g.arg_points();
  while (sz < entries) {
    sz *= N * N;
    ++k;
  }
  if (sz != entries || k < 1)
    throw std::runtime_error("snapshot size is not a marginal shape: " + path);
  is.seekg(28);
  DenseMarginal out(g, k);
  for (auto& v : out.kernel().values()) {
    double re = get_f64(is);
    double im = get_f64(is);
    v = {re, im};
  }
  if (!is) throw std::runtime_error("snapshot truncated: " + path);
  return out;
}

}  // namespace gph

#include "gph/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "gph/errors.hpp"

namespace gph {

TensorField::TensorField(const Grid& g, int args) : grid_(g), args_(args) {
  std::size_t sz = 1;
  for (int a = 0; a < args; ++a) sz *= g.arg_points();
  check_capacity(sz);
  v_.assign(sz, cplx{0.0, 0.0});
}

TensorField& TensorField::operator+=(const TensorField& o) {
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

TensorField& TensorField::operator-=(const TensorField& o) {
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

TensorField& TensorField::operator*=(cplx c) {
  for (auto& x : v_) x *= c;
  return *this;
}

void TensorField::axpy(cplx a, const TensorField& o) {
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += a * o.v_[i];
}

double TensorField::max_abs() const {
  double m = 0.0;
  for (const auto& x : v_) m = std::max(m, std::abs(x));
  return m;
}

bool TensorField::finite() const {
  for (const auto& x : v_)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

namespace spectral {

namespace {

// FFTW plans cached per (n, sign); executed with the new-array interface so
// concurrent transforms on distinct buffers stay safe.
class PlanCache {
 public:
  static fftw_plan get(int n, int sign) {
    static PlanCache cache;
    std::lock_guard<std::mutex> lock(cache.mu_);
    auto key = std::make_pair(n, sign);
    auto it = cache.plans_.find(key);
    if (it != cache.plans_.end()) return it->second;
    std::vector<cplx> buf(n);
    fftw_plan p = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(buf.data()),
        reinterpret_cast<fftw_complex*>(buf.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

// one 1-D pass along `axis` (global axis in [0, args*d)), in place
void fft_axis(TensorField& f, int axis, int fftw_sign, double scale) {
  const int n = f.grid().points();
  const int total_axes = f.args() * f.grid().dim();
  std::size_t stride = 1;
  for (int b = total_axes - 1; b > axis; --b) stride *= n;
  const std::size_t block = stride * n;
  const std::size_t nblocks = f.size() / block;

  fftw_plan plan = PlanCache::get(n, fftw_sign);
  std::vector<cplx> line(n);
  cplx* v = f.data();
  for (std::size_t b = 0; b < nblocks; ++b) {
    cplx* base = v + b * block;
    for (std::size_t s = 0; s < stride; ++s) {
      for (int i = 0; i < n; ++i) line[i] = base[s + stride * i];
      fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(line.data()),
                       reinterpret_cast<fftw_complex*>(line.data()));
      for (int i = 0; i < n; ++i) base[s + stride * i] = scale * line[i];
    }
  }
}

}  // namespace

void transform(TensorField& f, std::span<const int> args, int sign,
               bool forward) {
  const Grid& g = f.grid();
  // forward analysis with sign s multiplies by e^{s*i*u*x}; FFTW_FORWARD
  // is e^{-iux}.  Unitary scaling: dx/sqrt(L) per axis forward, 1/sqrt(L)
  // per axis inverse.
  const int fftw_sign = forward ? (sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD)
                                : (sign < 0 ? FFTW_BACKWARD : FFTW_FORWARD);
  const double scale =
      forward ? g.dx() / std::sqrt(g.length()) : 1.0 / std::sqrt(g.length());
  for (int a : args) {
    if (a < 0 || a >= f.args())
      throw std::invalid_argument("transform: argument index out of range");
    for (int ax = 0; ax < g.dim(); ++ax)
      fft_axis(f, a * g.dim() + ax, fftw_sign, scale);
  }
}

void transform_all(TensorField& f, int sign, bool forward) {
  std::vector<int> args(f.args());
  for (int a = 0; a < f.args(); ++a) args[a] = a;
  transform(f, args, sign, forward);
}

void transform_kernel(TensorField& f, int k, bool forward) {
  std::vector<int> unprimed(k), primed(k);
  for (int a = 0; a < k; ++a) {
    unprimed[a] = a;
    primed[a] = k + a;
  }
  transform(f, unprimed, -1, forward);
  transform(f, primed, +1, forward);
}

namespace {
template <typename S>
void apply_symbol_impl(TensorField& f, int a, std::span<const S> symbol) {
  const std::size_t N = f.grid().arg_points();
  if (symbol.size() != N)
    throw std::invalid_argument("symbol size does not match the lattice");
  std::size_t trailing = 1;
  for (int b = f.args() - 1; b > a; --b) trailing *= N;
  const std::size_t leading = f.size() / (trailing * N);
  cplx* v = f.data();
  for (std::size_t o = 0; o < leading; ++o)
    for (std::size_t s = 0; s < N; ++s) {
      const S w = symbol[s];
      cplx* base = v + (o * N + s) * trailing;
      for (std::size_t t = 0; t < trailing; ++t) base[t] *= w;
    }
}
}  // namespace

void apply_arg_symbol(TensorField& f, int a, std::span<const double> symbol) {
  apply_symbol_impl<double>(f, a, symbol);
}

void apply_arg_symbol(TensorField& f, int a, std::span<const cplx> symbol) {
  apply_symbol_impl<cplx>(f, a, symbol);
}

}  // namespace spectral

}  // namespace gph

#include "gph/grid.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gph/errors.hpp"

namespace gph {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(int d, int n, double L)
    : d_(d), n_(n), L_(L), dx_(L / n),
      two_pi_over_L_(2.0 * 3.14159265358979323846264338328 / L) {
  N_ = 1;
  for (int i = 0; i < d_; ++i) N_ *= static_cast<std::size_t>(n_);
  freq_sq_.resize(N_);
  for (std::size_t s = 0; s < N_; ++s) {
    std::size_t rem = s;
    double acc = 0.0;
    for (int ax = d_ - 1; ax >= 0; --ax) {
      int i = static_cast<int>(rem % n_);
      rem /= n_;
      double f = freq(i);
      acc += f * f;
      (void)ax;
    }
    freq_sq_[s] = acc;
  }
}

Grid make_grid(int d, int n, double L) {
  if (d != 1 && d != 2)
    throw std::invalid_argument("grid dimension must be 1 or 2, got " +
                                std::to_string(d));
  if (!power_of_two(n) || n < 4)
    throw std::invalid_argument(
        "points per axis must be a power of two >= 4, got " +
        std::to_string(n));
  if (!(L > 0))
    throw std::invalid_argument("period length must be positive");
  return Grid(d, n, L);
}

std::size_t mem_cap_entries() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("GPH_MEM_CAP")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return static_cast<std::size_t>(1) << 27;
  }();
  return cap;
}

void check_capacity(std::size_t required_entries) {
  if (required_entries > mem_cap_entries())
    throw CapacityError(required_entries, mem_cap_entries());
}

}  // namespace gph

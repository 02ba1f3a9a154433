#include "doctest.h"

#include <cmath>

#include "gph/multiplier.hpp"
#include "gph/rng.hpp"
#include "gph/wavefunction.hpp"

using namespace gph;

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;

TensorField random_field(const Grid& g, int args, std::uint64_t seed) {
  Rng rng(seed);
  TensorField f(g, args);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.cgaussian();
  return f;
}

double l2_sq_space(const TensorField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]);
  return s * f.grid().weight(f.args());
}

double coeff_sq(const TensorField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]);
  return s;
}
}  // namespace

TEST_CASE("grid construction and frequency lattice") {
  Grid g = make_grid(1, 8, kTwoPi);
  CHECK(g.dx() == doctest::Approx(kTwoPi / 8).epsilon(1e-15));
  // integer modes, Nyquist negative
  std::vector<int> modes;
  for (int i = 0; i < 8; ++i) modes.push_back(g.mode(i));
  CHECK(modes == std::vector<int>{0, 1, 2, 3, -4, -3, -2, -1});

  Grid g4 = make_grid(1, 4, 1.0);
  std::vector<double> fr;
  for (int i = 0; i < 4; ++i) fr.push_back(g4.freq(i));
  CHECK(fr[0] == doctest::Approx(0.0));
  CHECK(fr[1] == doctest::Approx(kTwoPi));
  CHECK(fr[2] == doctest::Approx(-2 * kTwoPi));
  CHECK(fr[3] == doctest::Approx(-kTwoPi));

  Grid g2 = make_grid(2, 16, kTwoPi);
  CHECK(g2.arg_points() == 256);
  CHECK(g2.weight(1) == doctest::Approx(std::pow(kTwoPi / 16, 2)));

  CHECK_THROWS_AS(make_grid(3, 8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 12, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 8, -1.0), std::invalid_argument);
}

TEST_CASE("transform normalization: constant and plane wave") {
  Grid g = make_grid(1, 8, kTwoPi);
  TensorField f(g, 1);
  const double amp = 1.0 / std::sqrt(kTwoPi);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = amp;
  spectral::transform_all(f, -1, true);
  CHECK(std::abs(f[0] - cplx{1.0, 0.0}) < 1e-14);
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(std::abs(f[i]) < 1e-14);

  WaveFunction pw = plane_wave(g, 3);
  auto c = fourier_coefficients(pw);
  CHECK(std::abs(c[3] - cplx{1.0, 0.0}) < 1e-13);
}

TEST_CASE("transform round trip and Parseval") {
  for (int d : {1, 2}) {
    Grid g = make_grid(d, d == 1 ? 16 : 8, 5.0);
    for (int args = 1; args <= (d == 1 ? 4 : 2); ++args) {
      TensorField f = random_field(g, args, 42 + args + 10 * d);
      TensorField f0 = f;
      double before = l2_sq_space(f);
      spectral::transform_all(f, -1, true);
      CHECK(coeff_sq(f) == doctest::Approx(before).epsilon(1e-10));
      spectral::transform_all(f, -1, false);
      double diff = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i)
        diff = std::max(diff, std::abs(f[i] - f0[i]));
      CHECK(diff < 1e-12 * f0.max_abs());
    }
  }
}

TEST_CASE("primed-argument analysis uses the conjugate convention") {
  Grid g = make_grid(1, 8, kTwoPi);
  // kernel phi(x) conj(phi(x')) must transform to phihat(u) conj(phihat(u'))
  WaveFunction pw = plane_wave(g, 2);
  TensorField f(g, 2);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c)
      f[r * 8 + c] = pw.values[r] * std::conj(pw.values[c]);
  spectral::transform_kernel(f, 1, true);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) {
      double want = (r == 2 && c == 2) ? 1.0 : 0.0;
      CHECK(std::abs(f[r * 8 + c] - want) < 1e-13);
    }
}

TEST_CASE("bessel multiplier values and algebra") {
  Grid g = make_grid(1, 8, kTwoPi);
  WaveFunction pw = plane_wave(g, 1);
  TensorField f(g, 1);
  f.values() = pw.values;
  FourierMultiplier m = bessel_multiplier(g, 1.0);
  int args[1] = {0};
  int signs[1] = {-1};
  m.apply(f, args, signs);
  // <1> = sqrt(2)
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(std::abs(f[i] - std::sqrt(2.0) * pw.values[i]) < 1e-13);

  // alpha = 0 is the identity
  TensorField r = random_field(g, 2, 7);
  TensorField r0 = r;
  FourierMultiplier id = bessel_multiplier(g, 0.0);
  int both[2] = {0, 1};
  int ss[2] = {-1, +1};
  id.apply(r, both, ss);
  for (std::size_t i = 0; i < r.size(); ++i)
    CHECK(std::abs(r[i] - r0[i]) < 1e-12);

  // composition law <D>^a <D>^b = <D>^(a+b)
  TensorField x = random_field(g, 1, 9);
  TensorField y = x;
  FourierMultiplier ma = bessel_multiplier(g, 0.7);
  FourierMultiplier mb = bessel_multiplier(g, 0.55);
  FourierMultiplier mab = bessel_multiplier(g, 1.25);
  ma.apply(x, args, signs);
  mb.apply(x, args, signs);
  mab.apply(y, args, signs);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(std::abs(x[i] - y[i]) < 1e-12 * y.max_abs());
}

TEST_CASE("multipliers on disjoint arguments commute exactly") {
  Grid g = make_grid(1, 8, kTwoPi);
  TensorField f = random_field(g, 2, 11);
  TensorField a = f, b = f;
  FourierMultiplier m0 = bessel_multiplier(g, 0.8);
  FourierMultiplier m1 = bessel_multiplier(g, 1.3);
  int a0[1] = {0}, a1[1] = {1};
  int s[1] = {-1};
  m0.apply(a, a0, s);
  m1.apply(a, a1, s);
  m1.apply(b, a1, s);
  m0.apply(b, a0, s);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a[i] - b[i]) < 1e-12 * a.max_abs());
}

TEST_CASE("littlewood-paley band selection") {
  Grid g = make_grid(1, 16, kTwoPi);
  WaveFunction pw = plane_wave(g, 4);  // |xi| = 4 sits in the sharp j=2 band
  TensorField f(g, 1);
  f.values() = pw.values;

  TensorField kept = lp_project(f, 2, LpFamily::Sharp, 0);
  TensorField dropped = lp_project(f, 1, LpFamily::Sharp, 0);
  double dk = 0.0, dd = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    dk = std::max(dk, std::abs(kept[i] - f[i]));
    dd = std::max(dd, std::abs(dropped[i]));
  }
  CHECK(dk < 1e-13);
  CHECK(dd < 1e-13);

  // mode zero only passes the j=0 ball
  WaveFunction zero = plane_wave(g, 0);
  TensorField z(g, 1);
  z.values() = zero.values;
  for (int j = 0; j <= lp_max_band(g); ++j) {
    TensorField pj = lp_project(z, j, LpFamily::Sharp, 0);
    double mass = pj.max_abs();
    if (j == 0)
      CHECK(mass > 0.1);
    else
      CHECK(mass < 1e-14);
  }
}

TEST_CASE("both lp families are partitions of unity on the lattice") {
  for (auto family : {LpFamily::Sharp, LpFamily::Smooth}) {
    Grid g = make_grid(1, 32, kTwoPi);
    TensorField f = random_field(g, 1, 13);
    TensorField sum(g, 1);
    for (int j = 0; j <= lp_max_band(g); ++j)
      sum += lp_project(f, j, family, 0);
    double diff = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      diff = std::max(diff, std::abs(sum[i] - f[i]));
    CHECK(diff < 1e-12 * f.max_abs());
  }
}

TEST_CASE("smooth lp symbols honor the support bands") {
  for (int j = 1; j <= 5; ++j) {
    const double lo = (2.0 / 3.0) * std::ldexp(1.0, j);
    const double hi = 3.0 * std::ldexp(1.0, j);
    for (double r = 0.05; r < 2 * hi; r += 0.05) {
      double v = lp_symbol(r, j, LpFamily::Smooth);
      if (r <= lo || r >= hi) CHECK(std::abs(v) < 1e-15);
      CHECK(v >= -1e-15);
      CHECK(v <= 1.0 + 1e-15);
    }
  }
  // j=0 support inside |xi| <= 3
  for (double r = 3.0; r < 10.0; r += 0.1)
    CHECK(lp_symbol(r, 0, LpFamily::Smooth) == 0.0);
}

TEST_CASE("cube projector selects integer frequency boxes") {
  Grid g = make_grid(1, 8, kTwoPi);  // integer frequency lattice
  long r3[1] = {3};
  FourierMultiplier cube = cube_multiplier(g, r3);
  WaveFunction pw3 = plane_wave(g, 3);
  WaveFunction pw2 = plane_wave(g, 2);
  TensorField f3(g, 1), f2(g, 1);
  f3.values() = pw3.values;
  f2.values() = pw2.values;
  int args[1] = {0};
  int signs[1] = {-1};
  cube.apply(f3, args, signs);
  cube.apply(f2, args, signs);
  double keep = 0.0, drop = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    keep = std::max(keep, std::abs(f3[i] - pw3.values[i]));
    drop = std::max(drop, std::abs(f2[i]));
  }
  CHECK(keep < 1e-13);
  CHECK(drop < 1e-13);
}

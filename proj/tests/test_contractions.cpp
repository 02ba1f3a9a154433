#include "doctest.h"

#include <cmath>

#include "gph/contraction.hpp"
#include "gph/nls.hpp"
#include "gph/rng.hpp"

using namespace gph;

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;

// independent index-pinning reference for B^+/- on a dense kernel
DenseMarginal b_reference(const DenseMarginal& g, const ContractionSpec& s,
                          bool plus) {
  const Grid& grid = g.grid();
  const std::size_t N = grid.arg_points();
  const int kin = s.input_order();
  const int half_p = s.p / 2;
  DenseMarginal out(grid, s.k);
  std::vector<std::size_t> oidx(2 * s.k);
  for (std::size_t of = 0; of < out.kernel().size(); ++of) {
    std::size_t rem = of;
    for (int a = 2 * s.k - 1; a >= 0; --a) {
      oidx[a] = rem % N;
      rem /= N;
    }
    const std::size_t z = plus ? oidx[s.j - 1] : oidx[s.k + s.j - 1];
    std::vector<std::size_t> full(2 * kin);
    for (int a = 0; a < s.k; ++a) full[a] = oidx[a];
    for (int a = 0; a < half_p; ++a) full[s.k + a] = z;
    for (int a = 0; a < s.k; ++a) full[kin + a] = oidx[s.k + a];
    for (int a = 0; a < half_p; ++a) full[kin + s.k + a] = z;
    std::size_t f = 0;
    for (int a = 0; a < 2 * kin; ++a) f = f * N + full[a];
    out.kernel()[of] = g.kernel()[f];
  }
  return out;
}

MixtureState seeded_mixture(const Grid& g, int nc, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> w;
  std::vector<WaveFunction> states;
  for (int j = 0; j < nc; ++j) {
    w.push_back(0.25 + rng.uniform());
    states.push_back(random_state(g, rng.bits()));
  }
  return MixtureState(std::move(w), std::move(states));
}
}  // namespace

TEST_CASE("factorized closed form for b_plus and b_minus") {
  Grid g = make_grid(1, 8, kTwoPi);
  WaveFunction phi = random_state(g, 2);
  DenseMarginal g2 = factorized_marginal(phi, 2);
  ContractionSpec spec{2, 1, 1};

  DenseMarginal plus = b_plus_dense(g2, spec);
  DenseMarginal minus = b_minus_dense(g2, spec);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const cplx pw = std::norm(phi.values[a]) * phi.values[a] *
                      std::conj(phi.values[b]);
      const cplx mw = phi.values[a] * std::norm(phi.values[b]) *
                      std::conj(phi.values[b]);
      CHECK(std::abs(plus.kernel()[a * 8 + b] - pw) < 1e-14);
      CHECK(std::abs(minus.kernel()[a * 8 + b] - mw) < 1e-14);
    }
}

TEST_CASE("plane wave contraction scales by the constant modulus") {
  Grid g = make_grid(1, 8, kTwoPi);
  WaveFunction pw = plane_wave(g, 1);
  DenseMarginal g2 = factorized_marginal(pw, 2);
  DenseMarginal g1 = factorized_marginal(pw, 1);
  DenseMarginal out = b_plus_dense(g2, ContractionSpec{2, 1, 1});
  // |phi|^2 = 1/(2pi) pointwise
  double err = 0.0;
  for (std::size_t i = 0; i < out.kernel().size(); ++i)
    err = std::max(err, std::abs(out.kernel()[i] -
                                 g1.kernel()[i] / kTwoPi));
  CHECK(err < 1e-14);
}

TEST_CASE("dense contraction matches the naive pinning reference") {
  Grid g = make_grid(1, 8, kTwoPi);
  MixtureState mix = seeded_mixture(g, 2, 5);
  DenseMarginal g3 = mixture_marginal(mix, 3);
  for (int j = 1; j <= 2; ++j) {
    ContractionSpec spec{2, j, 2};
    CHECK(sup_distance(b_plus_dense(g3, spec), b_reference(g3, spec, true)) <
          1e-13);
    CHECK(sup_distance(b_minus_dense(g3, spec), b_reference(g3, spec, false)) <
          1e-13);
  }
  // quintic path at k=1 (order-3 input)
  ContractionSpec quintic{4, 1, 1};
  CHECK(sup_distance(b_plus_dense(g3, quintic),
                     b_reference(g3, quintic, true)) < 1e-13);
}

TEST_CASE("hermitian symmetry between the signed contractions") {
  Grid g = make_grid(1, 8, kTwoPi);
  MixtureState mix = seeded_mixture(g, 3, 7);
  DenseMarginal g3 = mixture_marginal(mix, 3);
  ContractionSpec spec{2, 2, 2};
  DenseMarginal plus = b_plus_dense(g3, spec);
  DenseMarginal minus = b_minus_dense(g3, spec);
  CHECK(sup_distance(minus, plus.adjoint()) < 1e-13);
  // equal traces, so Tr(B gamma) = 0
  CHECK(std::abs(plus.trace() - minus.trace()) < 1e-12);
}

TEST_CASE("b_full reduces to the single pair at k=1 and has zero trace") {
  Grid g = make_grid(1, 8, kTwoPi);
  MixtureState mix = seeded_mixture(g, 2, 9);
  DenseMarginal g2 = mixture_marginal(mix, 2);
  DenseMarginal full = b_full(g2, 1);
  ContractionSpec spec{2, 1, 1};
  DenseMarginal ref = b_plus_dense(g2, spec);
  ref.kernel() -= b_minus_dense(g2, spec).kernel();
  CHECK(sup_distance(full, ref) < 1e-14);
  CHECK(std::abs(full.trace()) < 1e-12);

  DenseMarginal g3 = mixture_marginal(mix, 3);
  CHECK(std::abs(b_full(g3, 2).trace()) < 1e-12);
}

TEST_CASE("b_full is linear over mixtures") {
  Grid g = make_grid(1, 8, kTwoPi);
  WaveFunction a = random_state(g, 11), b = random_state(g, 13);
  MixtureState mix({0.3, 0.7}, {a, b});
  DenseMarginal whole = b_full(mixture_marginal(mix, 2), 1);
  DenseMarginal parts(g, 1);
  parts.kernel().axpy(0.3, b_full(factorized_marginal(a, 2), 1).kernel());
  parts.kernel().axpy(0.7, b_full(factorized_marginal(b, 2), 1).kernel());
  CHECK(sup_distance(whole, parts) < 1e-13);
}

TEST_CASE("permutation covariance of the target index") {
  Grid g = make_grid(1, 8, kTwoPi);
  MixtureState mix = seeded_mixture(g, 2, 15);
  DenseMarginal g3 = mixture_marginal(mix, 3);
  // swapping the two output slots turns B_1 into B_2
  DenseMarginal b1 = b_plus_dense(g3, ContractionSpec{2, 1, 2});
  DenseMarginal b2 = b_plus_dense(g3, ContractionSpec{2, 2, 2});
  const std::size_t N = g.arg_points();
  double err = 0.0;
  for (std::size_t x1 = 0; x1 < N; ++x1)
    for (std::size_t x2 = 0; x2 < N; ++x2)
      for (std::size_t y1 = 0; y1 < N; ++y1)
        for (std::size_t y2 = 0; y2 < N; ++y2) {
          const cplx lhs =
              b1.kernel()[((x1 * N + x2) * N + y1) * N + y2];
          const cplx rhs =
              b2.kernel()[((x2 * N + x1) * N + y2) * N + y1];
          err = std::max(err, std::abs(lhs - rhs));
        }
  CHECK(err < 1e-14);
}

TEST_CASE("b_full output is hermitian-odd on hermitian input") {
  Grid g = make_grid(1, 8, kTwoPi);
  MixtureState mix = seeded_mixture(g, 2, 17);
  DenseMarginal g3 = mixture_marginal(mix, 3);
  DenseMarginal out = b_full(g3, 2);
  DenseMarginal neg = out.adjoint();
  neg.kernel() *= cplx{-1.0, 0.0};
  CHECK(sup_distance(out, neg) < 1e-13);
}

TEST_CASE("k_op_trace equals 1/2 + E1 on factorized states") {
  Grid g = make_grid(1, 16, kTwoPi);
  NlsParams params{2, 1.0, 1e-3, 1.0};

  WaveFunction pw = plane_wave(g, 1);
  DenseMarginal g2 = factorized_marginal(pw, 2);
  CHECK(k_op_trace(g2, 2, 1.0) ==
        doctest::Approx(0.5 + nls_energy(pw, params)).epsilon(1e-12));
  CHECK(k_op_trace(g2, 2, 1.0) ==
        doctest::Approx(1.0 + 1.0 / (8 * std::acos(-1.0))).epsilon(1e-10));

  WaveFunction phi = gaussian_state(g, 3.1, 0.8);
  DenseMarginal gg = factorized_marginal(phi, 2);
  CHECK(k_op_trace(gg, 2, 1.0) ==
        doctest::Approx(0.5 + nls_energy(phi, params)).epsilon(1e-11));

  // mu = 0 leaves the kinetic part alone
  CHECK(k_op_trace(gg, 2, 0.0) ==
        doctest::Approx(0.5 * (1.0 + kinetic_energy(phi))).epsilon(1e-11));

  CHECK_THROWS_AS(k_op_trace(factorized_marginal(phi, 1), 2, 1.0),
                  std::invalid_argument);
}

TEST_CASE("contraction spec validation and capacity") {
  ContractionSpec bad{2, 3, 2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  Grid g = make_grid(1, 8, kTwoPi);
  WaveFunction phi = random_state(g, 19);
  DenseMarginal g2 = factorized_marginal(phi, 2);
  CHECK_THROWS_AS(b_plus_dense(g2, ContractionSpec{2, 1, 2}),
                  std::invalid_argument);
}

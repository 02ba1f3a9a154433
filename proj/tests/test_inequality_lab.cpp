#include "doctest.h"

#include <cmath>

#include "gph/inequality.hpp"
#include "gph/rng.hpp"

using namespace gph;

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;

SampleSpec small_spec(int count = 60, std::uint64_t seed = 1) {
  SampleSpec s;
  s.q = 2;
  s.d = 1;
  s.n = 32;
  s.L = kTwoPi;
  s.decay = 2.0;
  s.seed = seed;
  s.count = count;
  return s;
}
}  // namespace

TEST_CASE("samples are deterministic, unit mass, and h1-regular") {
  SampleSpec spec = small_spec();
  TensorField a = sample_function(spec, 7);
  TensorField b = sample_function(spec, 7);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m += std::norm(a[i]);
  m *= a.grid().weight(2);
  CHECK(m == doctest::Approx(1.0).epsilon(1e-12));

  // strong decay concentrates the energy at mode zero: H^1 close to L^2
  SampleSpec heavy = small_spec();
  heavy.decay = 10.0;
  TensorField h = sample_function(heavy, 3);
  CHECK(mixed_sobolev_norm(h, 1.0) < 1.1);
  CHECK(mixed_sobolev_norm(h, 1.0) >= 1.0 - 1e-12);
}

TEST_CASE("diagonal restriction closed forms") {
  Grid g = make_grid(1, 16, kTwoPi);
  // constant g x g: diag value (2pi)^-1, norm (2pi)^-1/2
  TensorField f(g, 2);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 / kTwoPi;
  CHECK(diagonal_restriction_norm(f) ==
        doctest::Approx(1.0 / std::sqrt(kTwoPi)).epsilon(1e-12));

  // product of plane waves at modes a and b restricts to mode a+b
  WaveFunction pa = plane_wave(g, 2), pb = plane_wave(g, 3);
  TensorField prod(g, 2);
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 16; ++c)
      prod[r * 16 + c] = pa.values[r] * pb.values[c];
  // diag = e^{i5x}/(2pi): L2 norm (2pi)^-1/2
  CHECK(diagonal_restriction_norm(prod) ==
        doctest::Approx(1.0 / std::sqrt(kTwoPi)).epsilon(1e-12));

  // Fourier-side convolution oracle: sum over xi1+xi2 = eta
  SampleSpec spec = small_spec();
  TensorField s = sample_function(spec, 11);
  TensorField shat = s;
  spectral::transform_all(shat, -1, true);
  const Grid& gg = s.grid();
  const int n = gg.points();
  double acc = 0.0;
  for (int eta = 0; eta < n; ++eta) {
    cplx line{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      int j = ((eta - gg.mode(i)) % n + n) % n;  // mode index with j's mode = eta-mode(i) (mod n)
      // map target mode to lattice index
      int jm = gg.mode(j);
      (void)jm;
      line += shat[static_cast<std::size_t>(i) * n + j];
    }
    acc += std::norm(line);
  }
  acc /= gg.length();  // 1/sqrt(L) amplitude per factor, squared
  CHECK(diagonal_restriction_norm(s) ==
        doctest::Approx(std::sqrt(acc)).epsilon(1e-9));
}

TEST_CASE("sobolev ratio worked examples") {
  Grid g = make_grid(1, 16, kTwoPi);
  TensorField flat(g, 2);
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = 1.0 / kTwoPi;
  RatioRecord r = sobolev_ratio(flat, 0.5);
  CHECK(r.ratio == doctest::Approx(0.3989422804014327).epsilon(1e-10));
  CHECK(r.in_regime);
  RatioRecord low = sobolev_ratio(flat, 0.2);
  CHECK(!low.in_regime);  // alpha0 = 1/4 for q=2, d=1

  // single high tensor mode: ratio decays like (1+N^2)^-alpha
  for (int N : {3, 6}) {
    WaveFunction p = plane_wave(g, N);
    TensorField f(g, 2);
    for (std::size_t a = 0; a < 16; ++a)
      for (std::size_t b = 0; b < 16; ++b)
        f[a * 16 + b] = p.values[a] * p.values[b];
    RatioRecord rr = sobolev_ratio(f, 0.5, 0);
    CHECK(rr.ratio == doctest::Approx(0.3989422804014327 /
                                      std::pow(1.0 + N * N, 0.5))
                          .epsilon(1e-9));
  }
}

TEST_CASE("gn ratio: substitution, worked value, homogeneity") {
  Grid g = make_grid(1, 16, kTwoPi);
  TensorField flat(g, 2);
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = 1.0 / kTwoPi;
  RatioRecord r = gn_ratio(flat, 0.5);
  // constant has H^1 = L^2 = 1
  CHECK(r.ratio == doctest::Approx(0.3989422804014327).epsilon(1e-10));

  SampleSpec spec = small_spec();
  TensorField f = sample_function(spec, 5);
  RatioRecord base = gn_ratio(f, 0.6);
  TensorField scaled = f;
  scaled *= cplx{37.5, 0.0};
  RatioRecord big = gn_ratio(scaled, 0.6);
  CHECK(std::abs(big.ratio - base.ratio) < 1e-12 * base.ratio);

  // unit-mass samples make gn_ratio = diag / ||f||_{H^1}^alpha
  CHECK(base.ratio ==
        doctest::Approx(base.lhs / std::pow(mixed_sobolev_norm(f, 1.0), 0.6))
            .epsilon(1e-12));
}

TEST_CASE("per-sample ratios decrease in alpha, so do the suprema") {
  SampleSpec spec = small_spec(40);
  for (int i = 0; i < 10; ++i) {
    TensorField f = sample_function(spec, i);
    double prev = 1e300;
    for (double a : {0.3, 0.5, 0.75, 1.0}) {
      double r = sobolev_ratio(f, a, i).ratio;
      CHECK(r <= prev * (1 + 1e-12));
      prev = r;
    }
  }
}

TEST_CASE("sampled ratios stabilize after a warm-up run") {
  SampleSpec spec = small_spec(400, 12);
  double running_max = 0.0;
  bool stable = true;
  for (int i = 0; i < spec.count; ++i) {
    const double r = sobolev_ratio(sample_function(spec, i), 0.5, i).ratio;
    CHECK(std::isfinite(r));
    if (i >= 100 && r > 10.0 * running_max) stable = false;
    running_max = std::max(running_max, r);
  }
  CHECK(stable);
}

TEST_CASE("estimate_constant: monotone c_hat, slope above the paper bound") {
  SampleSpec spec = small_spec(120, 3);
  const double a0 = alpha_threshold(2, 1);
  std::vector<double> grid_alphas;
  for (double e : {0.02, 0.05, 0.1, 0.2, 0.4}) grid_alphas.push_back(a0 + e);
  ConstantFit fit = estimate_constant(spec, grid_alphas);
  for (std::size_t i = 1; i < fit.c_hat.size(); ++i)
    CHECK(fit.c_hat[i] <= fit.c_hat[i - 1] * (1 + 1e-12));
  // the paper gives an upper bound with rate (alpha-alpha0)^{-q/2};
  // the sampled constant must not decay faster than that
  CHECK(fit.slope >= -1.0 - 0.5);
  CHECK_THROWS_AS(estimate_constant(spec, std::vector<double>{a0 + 0.1}),
                  std::invalid_argument);

  // doubling the sample count moves the supremum by less than 25%
  SampleSpec doubled = small_spec(240, 3);
  ConstantFit fit2 = estimate_constant(doubled, grid_alphas);
  for (std::size_t i = 0; i < fit.c_hat.size(); ++i) {
    CHECK(fit2.c_hat[i] >= fit.c_hat[i]);  // supremum over a superset
    CHECK(fit2.c_hat[i] < 1.25 * fit.c_hat[i]);
  }
}

TEST_CASE("dm_gn_check: rank-one reduction and closed forms") {
  Grid g = make_grid(1, 16, kTwoPi);
  WaveFunction phi = random_state(g, 9);
  MixtureState single({1.0}, {phi});

  // rank-one: ratio equals the squared sobolev ratio of the tensor power
  TensorField f(g, 2);
  for (std::size_t a = 0; a < 16; ++a)
    for (std::size_t b = 0; b < 16; ++b)
      f[a * 16 + b] = phi.values[a] * phi.values[b];
  const double alpha = 0.6;
  RatioRecord fr = sobolev_ratio(f, alpha);
  DmGnRecord low = dm_gn_check(single, alpha, 2);
  CHECK(low.ratio == doctest::Approx(fr.ratio * fr.ratio).epsilon(1e-10));

  // dense path agrees with the low-rank closed form
  DenseMarginal g2 = mixture_marginal(single, 2);
  DmGnRecord dense = dm_gn_check(g2, alpha, 2);
  CHECK(dense.ratio == doctest::Approx(low.ratio).epsilon(1e-9));

  // constant state: lhs = (2pi)^-(kp-1), rhs = 1
  MixtureState flat({1.0}, {plane_wave(g, 0)});
  DmGnRecord fc = dm_gn_check(flat, alpha, 2);
  CHECK(fc.lhs == doctest::Approx(1.0 / kTwoPi).epsilon(1e-12));
  CHECK(fc.rhs == doctest::Approx(1.0).epsilon(1e-12));

  // mixtures stay below the max of their component ratios (convexity)
  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w{0.3 + rng.uniform(), 0.3 + rng.uniform()};
    std::vector<WaveFunction> st{random_state(g, rng.bits()),
                                 random_state(g, rng.bits())};
    MixtureState mix(w, st);
    double comp_max = 0.0;
    for (int j = 0; j < 2; ++j) {
      MixtureState one({1.0}, {mix.states[j]});
      comp_max = std::max(comp_max, dm_gn_check(one, alpha, 2).ratio);
    }
    CHECK(dm_gn_check(mix, alpha, 2).ratio <= comp_max * (1 + 1e-12));
  }
}

TEST_CASE("frequency restriction chain on dense positive inputs") {
  Grid g = make_grid(1, 16, kTwoPi);
  const double alpha = 0.4;

  // plane-wave state: both sides are closed-form computable
  WaveFunction pw = plane_wave(g, 3);
  DenseMarginal g2 = factorized_marginal(pw, 2);
  FreqChainLedger led = freq_restriction_chain(g2, alpha, 2, -0.1, 0.3);
  CHECK(led.chain_holds);
  CHECK(led.lhs == doctest::Approx(std::pow(10.0, 2 * alpha)).epsilon(1e-10));
  CHECK(led.rhs >= led.lhs);

  // band-limited state: only the bands meeting the support contribute
  WaveFunction band = band_limited_state(g, 5, 1);
  DenseMarginal gb = factorized_marginal(band, 2);
  FreqChainLedger lb = freq_restriction_chain(gb, alpha, 2, -0.1, 0.3);
  double outside = 0.0;
  for (std::size_t j = 3; j < lb.band_terms.size(); ++j)
    outside += lb.band_terms[j];
  CHECK(outside < 1e-12);  // modes 0,1 live in smooth bands j <= 2

  // mu = 0: the lower bound degenerates to equality
  FreqChainLedger l0 = freq_restriction_chain(g2, alpha, 2, 0.0, 0.3);
  CHECK(l0.d_value == doctest::Approx(1.0));
  CHECK(2 * l0.k1_trace == doctest::Approx(l0.s11_trace).epsilon(1e-10));
  CHECK(l0.lower_bound_holds);

  // non-positive input is rejected
  DenseMarginal bad = g2;
  bad.kernel()[5 * 16 * 16 * 16] += 0.5;
  bad.hermitize();
  CHECK_THROWS_AS(freq_restriction_chain(bad, alpha, 2, -0.1, 0.3),
                  std::invalid_argument);
}

TEST_CASE("defocusing bound chain along an evolved mixture") {
  Grid g = make_grid(1, 32, kTwoPi);
  NlsParams params{2, 1.0, 1e-3, 0.0};
  Rng rng(3);
  std::vector<double> w{0.5, 0.3, 0.2};
  std::vector<WaveFunction> st;
  for (int m = 2; m <= 4; ++m) {
    WaveFunction carrier = plane_wave(g, m);
    WaveFunction bump = gaussian_state(g, 2.0 + m, 0.9);
    for (std::size_t i = 0; i < carrier.values.size(); ++i)
      carrier.values[i] += 0.15 * bump.values[i] *
                           std::polar(1.0, rng.uniform() * kTwoPi);
    carrier.normalize();
    st.push_back(carrier);
  }
  MixtureState mix(w, st);

  // measured constant from the sampling distribution
  SampleSpec spec = small_spec(200, 7);
  const double ratio = measure_sobolev_constant(spec, 1.0);
  const double c_sob = ratio * ratio;

  std::vector<MixtureState> snaps{mix};
  std::vector<double> times{0.0};
  MixtureState cur = mix;
  for (int s = 1; s <= 200; ++s) {
    for (auto& phi : cur.states) phi = strang_step(phi, params, 1e-3);
    if (s % 50 == 0) {
      snaps.push_back(cur);
      times.push_back(s * 1e-3);
    }
  }
  // the mode-4 carrier has s ~ 17, so xi' must stay below 1/s
  const double xi_prime = 0.04;
  const double xi =
      std::pow(1.0 + 0.5 * c_sob, -0.5) * xi_prime;  // paper relation, kp=2
  ChainReport rep = bound_chain_check(snaps, times, xi, xi_prime, params,
                                      Regime::Defocusing, c_sob, 0.0, 1.0);
  CHECK(rep.xi_relation_ok);
  CHECK(rep.all_hold);
  CHECK(rep.max_middle_drift < 1e-5);
  for (const auto& s : rep.snapshots) {
    CHECK(s.slack12 > 0.0);
    CHECK(s.slack23 > 0.0);
  }

  // at t=0 the chain degenerates to the static a priori bound
  std::vector<MixtureState> frozen{mix};
  std::vector<double> t0{0.0};
  ChainReport stat = bound_chain_check(frozen, t0, xi, xi_prime, params,
                                       Regime::Defocusing, c_sob, 0.0, 1.0);
  CHECK(stat.all_hold);
  CHECK(stat.max_middle_drift == 0.0);
}

TEST_CASE("focusing chain with the proof-side scale") {
  Grid g = make_grid(1, 32, kTwoPi);
  SampleSpec spec = small_spec(200, 7);
  const double alpha = 0.4;
  const double c0_ratio = measure_sobolev_constant(spec, alpha);
  const double c0 = c0_ratio * c0_ratio;
  const double c_sob_ratio = measure_sobolev_constant(spec, 1.0);
  const double c_sob = c_sob_ratio * c_sob_ratio;

  // |mu| at half the admissible threshold gives D = 1/2 exactly
  const double threshold = d_factor(alpha, 2, 1, 0.0, c0).mu_threshold;
  NlsParams params{2, -0.5 * threshold, 1e-3, 0.0};
  CHECK(d_factor(alpha, 2, 1, params.mu, c0).value ==
        doctest::Approx(0.5).epsilon(1e-12));

  MixtureState mix({0.6, 0.4},
                   {plane_wave(g, 2), plane_wave(g, 3)});
  std::vector<MixtureState> snaps{mix};
  std::vector<double> times{0.0};
  MixtureState cur = mix;
  for (int s = 1; s <= 100; ++s) {
    for (auto& phi : cur.states) phi = strang_step(phi, params, 1e-3);
    if (s % 25 == 0) {
      snaps.push_back(cur);
      times.push_back(s * 1e-3);
    }
  }
  const double D = 0.5;
  const double xi_prime = 0.08;
  const double xi = D * std::pow(1.0 + 0.5 * c_sob, -0.5) * xi_prime * 0.99;
  ChainReport rep = bound_chain_check(snaps, times, xi, xi_prime, params,
                                      Regime::FocusingL2Sub, c_sob, c0, alpha);
  CHECK(rep.d_value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.series_scale == doctest::Approx(2 * xi / 0.5).epsilon(1e-12));
  CHECK(rep.xi_relation_ok);
  CHECK(rep.all_hold);
  CHECK(rep.max_middle_drift < 1e-6);
}

#include "gph/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gph/hierarchy.hpp"
#include "gph/rng.hpp"

namespace gph {

const char* kVersion = "0.1.0";

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// deterministic CSV sink; checksummed into the manifest on close
class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& header) : path_(path) {
    os_.open(path);
    if (!os_) throw std::runtime_error("cannot open " + path.string());
    os_ << header << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
  }
  void close() { os_.close(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  std::ofstream os_;
};

std::string file_checksum(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string s = ss.str();
  return hex64(fnv1a64(s.data(), s.size()));
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct Emitter {
  fs::path dir;
  std::vector<fs::path> written;

  CsvFile csv(const std::string& name, const std::string& header) {
    written.push_back(dir / name);
    return CsvFile(dir / name, header);
  }
  void note(const fs::path& p) { written.push_back(p); }
};

std::vector<double> default_alphas(const ExperimentConfig& c, double lo,
                                   double hi) {
  if (!c.alphas.empty()) return c.alphas;
  std::vector<double> out;
  for (double a : {0.3, 0.5, 0.75, 1.0})
    if (a > lo && a <= hi) out.push_back(a);
  return out;
}

void run_nls(const ExperimentConfig& c, Emitter& em) {
  MixtureState mix = build_mixture(c);
  NlsParams params{c.p, c.mu, c.dt, c.T};
  const int cadence = c.snapshot_every > 0 ? c.snapshot_every : 100;
  CsvFile out = em.csv("nls.csv", "t,mass,energy,max_abs");
  Trajectory traj = evolve(mix.states[0], params, cadence);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const WaveFunction& phi = traj.states[i];
    double amax = 0.0;
    for (const auto& v : phi.values) amax = std::max(amax, std::abs(v));
    out.row({fmt(traj.times[i]), fmt(phi.mass()),
             fmt(nls_energy(phi, params)), fmt(amax)});
  }
  out.close();
}

void run_conserve(const ExperimentConfig& c, Emitter& em) {
  MixtureState mix = build_mixture(c);
  NlsParams params{c.p, c.mu, c.dt, c.T};
  const int cadence = c.snapshot_every > 0 ? c.snapshot_every : 100;
  const int nsteps = static_cast<int>(std::llround(c.T / c.dt));

  std::vector<double> base(c.M_max);
  for (int m = 1; m <= c.M_max; ++m)
    base[m - 1] = k_energy(mix, m, params).value;

  CsvFile out = em.csv("kseries.csv", "t,m,K_m,rel_drift");
  for (int m = 1; m <= c.M_max; ++m)
    out.row({fmt(0.0), std::to_string(m), fmt(base[m - 1]), fmt(0.0)});
  MixtureState cur = mix;
  for (int s = 1; s <= nsteps; ++s) {
    for (auto& phi : cur.states) phi = strang_step(phi, params, c.dt);
    if (s % cadence == 0 || s == nsteps) {
      for (int m = 1; m <= c.M_max; ++m) {
        double v = k_energy(cur, m, params).value;
        out.row({fmt(s * c.dt), std::to_string(m), fmt(v),
                 fmt(std::abs(v - base[m - 1]) / std::abs(base[m - 1]))});
      }
    }
  }
  out.close();
}

void run_hierarchy(const ExperimentConfig& c, Emitter& em) {
  MixtureState mix = build_mixture(c);
  HierarchyTruncation t0 = truncation_from_mixture(
      mix, c.K, c.p, c.mu,
      c.closure == "oracle" ? ClosureTag::Oracle : ClosureTag::Zero);
  const int cadence = c.snapshot_every > 0 ? c.snapshot_every : 10;
  HierarchyRun run = hierarchy_evolve(t0, c.dt, c.T, cadence);

  CsvFile out = em.csv("hierarchy.csv",
                       "t,level,trace,herm_residual,admiss_residual,min_eig");
  for (const auto& d : run.series)
    for (int k = 1; k <= t0.depth(); ++k)
      out.row({fmt(d.t), std::to_string(k), fmt(d.trace_real[k - 1]),
               fmt(d.herm_residual[k - 1]),
               fmt(k < t0.depth() ? d.admiss_residual[k - 1] : 0.0),
               fmt(d.min_eig[k - 1])});
  out.close();

  if (t0.closure == ClosureTag::Oracle) {
    CsvFile err = em.csv("hierarchy_oracle_error.csv", "t,level,sup_error");
    for (const auto& d : run.series)
      for (int k = 1; k <= t0.depth(); ++k)
        err.row({fmt(d.t), std::to_string(k), fmt(d.oracle_error[k - 1])});
    err.close();
  }

  const fs::path snap = em.dir / "hierarchy_gamma1.gph";
  write_snapshot(run.final_state.level(1), snap.string());
  em.note(snap);
}

void run_sobolev(const ExperimentConfig& c, Emitter& em) {
  Grid g = make_grid(c.d, c.n, c.L);
  SampleSpec spec{c.sample_q, c.d, c.n, c.L, c.sample_decay, c.seed,
                  c.sample_count};
  const double a0 = alpha_threshold(spec.q, spec.d);
  auto alphas = default_alphas(c, a0, 4.0);

  CsvFile out = em.csv("sobolev.csv", "experiment,alpha,sample,lhs,rhs,ratio");
  for (int i = 0; i < spec.count; ++i) {
    TensorField f = sample_function(spec, i);
    for (double a : alphas) {
      RatioRecord r = sobolev_ratio(f, a, i);
      out.row({"sobolev", fmt(a), std::to_string(i), fmt(r.lhs), fmt(r.rhs),
               fmt(r.ratio)});
    }
  }
  out.close();

  std::vector<double> near;
  for (double e : {0.02, 0.05, 0.1, 0.2, 0.4}) near.push_back(a0 + e);
  ConstantFit fit = estimate_constant(spec, near);
  CsvFile fout = em.csv("sobolev_fit.csv", "alpha,eps,C_hat,n_samples,slope");
  for (std::size_t i = 0; i < fit.alphas.size(); ++i)
    fout.row({fmt(fit.alphas[i]), fmt(fit.eps[i]), fmt(fit.c_hat[i]),
              std::to_string(fit.samples_per_alpha), fmt(fit.slope)});
  fout.close();
}

void run_gn(const ExperimentConfig& c, Emitter& em) {
  SampleSpec spec{c.sample_q, c.d, c.n, c.L, c.sample_decay, c.seed,
                  c.sample_count};
  const double a0 = alpha_threshold(spec.q, spec.d);
  auto alphas = default_alphas(c, a0, 1.0 - 1e-9);
  CsvFile out = em.csv("gn.csv", "experiment,alpha,sample,lhs,rhs,ratio");
  for (int i = 0; i < spec.count; ++i) {
    TensorField f = sample_function(spec, i);
    for (double a : alphas) {
      RatioRecord r = gn_ratio(f, a, i);
      out.row({"gn", fmt(a), std::to_string(i), fmt(r.lhs), fmt(r.rhs),
               fmt(r.ratio)});
    }
  }
  out.close();
}

void run_dmgn(const ExperimentConfig& c, Emitter& em) {
  Grid g = make_grid(c.d, c.n, c.L);
  const int kp = 1 + c.p / 2;
  const double a0 = alpha_threshold(kp, c.d);
  auto alphas = default_alphas(c, a0, 4.0);
  CsvFile out = em.csv("dmgn.csv", "experiment,alpha,sample,lhs,rhs,ratio");
  // sample -1: the configured mixture; then seeded random mixtures
  if (!c.mixture.empty()) {
    MixtureState mix = build_mixture(c);
    for (double a : alphas) {
      DmGnRecord r = dm_gn_check(mix, a, c.p);
      out.row({"dmgn", fmt(a), "-1", fmt(r.lhs), fmt(r.rhs), fmt(r.ratio)});
    }
  }
  for (int i = 0; i < c.sample_count; ++i) {
    Rng rng(mix_seed(c.seed, 1000 + i));
    const int nc = 1 + static_cast<int>(rng.bits() % 3);
    std::vector<double> w;
    std::vector<WaveFunction> states;
    for (int j = 0; j < nc; ++j) {
      w.push_back(0.2 + rng.uniform());
      states.push_back(random_state(g, rng.bits(), c.sample_decay));
    }
    MixtureState mix(std::move(w), std::move(states));
    for (double a : alphas) {
      DmGnRecord r = dm_gn_check(mix, a, c.p);
      out.row({"dmgn", fmt(a), std::to_string(i), fmt(r.lhs), fmt(r.rhs),
               fmt(r.ratio)});
    }
  }
  out.close();
}

void run_chain(const ExperimentConfig& c, Emitter& em) {
  MixtureState mix = build_mixture(c);
  NlsParams params{c.p, c.mu, c.dt, c.T};
  const int cadence = c.snapshot_every > 0 ? c.snapshot_every : 100;
  const int nsteps = static_cast<int>(std::llround(c.T / c.dt));

  std::vector<MixtureState> snaps{mix};
  std::vector<double> times{0.0};
  MixtureState cur = mix;
  for (int s = 1; s <= nsteps; ++s) {
    for (auto& phi : cur.states) phi = strang_step(phi, params, c.dt);
    if (s % cadence == 0 || s == nsteps) {
      snaps.push_back(cur);
      times.push_back(s * c.dt);
    }
  }

  const int kp = 1 + c.p / 2;
  SampleSpec spec{kp, c.d, std::min(c.n, 32), c.L, c.sample_decay, c.seed,
                  std::min(c.sample_count, 300)};
  const double c_sob_ratio = measure_sobolev_constant(spec, 1.0);
  const double c_sob = c_sob_ratio * c_sob_ratio;
  const double c0_ratio = measure_sobolev_constant(spec, c.alpha);
  const double c0 = c0_ratio * c0_ratio;

  Regime regime =
      c.regime == "focusing" ? Regime::FocusingL2Sub : Regime::Defocusing;
  ChainReport rep = bound_chain_check(snaps, times, c.xi, c.xi_prime, params,
                                      regime, c_sob, c0, c.alpha);

  CsvFile out = em.csv(
      "chain.csv",
      "t,member1,member2,member3,slack12,slack23,middle_drift,holds");
  for (const auto& s : rep.snapshots)
    out.row({fmt(s.t), fmt(s.member1), fmt(s.member2), fmt(s.member3),
             fmt(s.slack12), fmt(s.slack23), fmt(s.middle_drift),
             s.holds ? "1" : "0"});
  out.close();

  CsvFile sum = em.csv("chain_summary.csv",
                       "regime,xi,xi_prime,D,scale,c_sob,c0,xi_relation_ok,"
                       "all_hold,max_middle_drift");
  sum.row({c.regime, fmt(rep.xi), fmt(rep.xi_prime), fmt(rep.d_value),
           fmt(rep.series_scale), fmt(c_sob), fmt(c0),
           rep.xi_relation_ok ? "1" : "0", rep.all_hold ? "1" : "0",
           fmt(rep.max_middle_drift)});
  sum.close();
}

void run_cancel(const ExperimentConfig& c, Emitter& em) {
  Grid g = make_grid(c.d, c.n, c.L);
  const int kp = 1 + c.p / 2;
  CsvFile out =
      em.csv("cancel.csv", "input,mu,r_h1,r_mixed,r_b2,scale");
  for (int i = 0; i < c.cancel_inputs; ++i) {
    Rng rng(mix_seed(c.seed, 500 + i));
    const int nc = 1 + static_cast<int>(rng.bits() % 2);
    std::vector<double> w;
    std::vector<WaveFunction> states;
    for (int j = 0; j < nc; ++j) {
      w.push_back(0.3 + rng.uniform());
      states.push_back(band_limited_state(g, rng.bits(), 1));
    }
    MixtureState mix(std::move(w), std::move(states));
    DenseMarginal gk = mixture_marginal(mix, kp);
    DenseMarginal gb = mixture_marginal(mix, 2 * kp - 1);
    CancellationReport rep = cancellation_terms(gk, gb, c.p, c.mu);
    out.row({std::to_string(i), fmt(c.mu), fmt(rep.r_h1), fmt(rep.r_mixed),
             fmt(rep.r_b2), fmt(rep.scale)});
  }
  out.close();
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& c) {
  c.validate();
  RunManifest man;
  man.code_version = kVersion;
  man.started = timestamp();
  const std::string cfg = serialize_config(c);
  man.config_hash = hex64(fnv1a64(cfg.data(), cfg.size()));

  Emitter em;
  em.dir = c.out_dir;
  fs::create_directories(em.dir);

  if (c.experiment == "nls") run_nls(c, em);
  else if (c.experiment == "conserve") run_conserve(c, em);
  else if (c.experiment == "hierarchy") run_hierarchy(c, em);
  else if (c.experiment == "sobolev") run_sobolev(c, em);
  else if (c.experiment == "gn") run_gn(c, em);
  else if (c.experiment == "dmgn") run_dmgn(c, em);
  else if (c.experiment == "chain") run_chain(c, em);
  else if (c.experiment == "cancel") run_cancel(c, em);
  else
    throw ConfigError(kValidationError, "unknown experiment " + c.experiment);

  man.finished = timestamp();
  for (const auto& p : em.written)
    man.files.emplace_back(p.filename().string(), file_checksum(p));

  nlohmann::json j;
  j["config_hash"] = man.config_hash;
  j["code_version"] = man.code_version;
  j["started"] = man.started;
  j["finished"] = man.finished;
  j["config"] = nlohmann::json::parse(cfg);
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [name, sum] : man.files)
    files.push_back({{"name", name}, {"checksum", sum}});
  j["files"] = files;
  std::ofstream os(em.dir / "manifest.json");
  os << j.dump(2) << "\n";
  return man;
}

}  // namespace gph

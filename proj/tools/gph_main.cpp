#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "gph/experiments.hpp"

namespace {

const char* kSchemaHelp = R"(CSV schemas per experiment:
  nls        nls.csv: t,mass,energy,max_abs
  conserve   kseries.csv: t,m,K_m,rel_drift
  hierarchy  hierarchy.csv: t,level,trace,herm_residual,admiss_residual,min_eig
             hierarchy_oracle_error.csv: t,level,sup_error (oracle closure)
             hierarchy_gamma1.gph: binary snapshot of the final gamma^(1)
  sobolev    sobolev.csv: experiment,alpha,sample,lhs,rhs,ratio
             sobolev_fit.csv: alpha,eps,C_hat,n_samples,slope
  gn         gn.csv: experiment,alpha,sample,lhs,rhs,ratio
  dmgn       dmgn.csv: experiment,alpha,sample,lhs,rhs,ratio
  chain      chain.csv: t,member1,member2,member3,slack12,slack23,middle_drift,holds
             chain_summary.csv: regime,xi,xi_prime,D,scale,c_sob,c0,xi_relation_ok,all_hold,max_middle_drift
  cancel     cancel.csv: input,mu,r_h1,r_mixed,r_b2,scale

Every run writes manifest.json with the config hash and per-file checksums.
Exit codes: 0 ok, 2 config parse error, 3 validation error, 4 numerical failure.
GPH_MEM_CAP overrides the dense-tensor entry cap (default 2^27 complex entries).)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gph - Gross-Pitaevskii hierarchy experiments"};
  app.footer(kSchemaHelp);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;

  for (const char* name : {"nls", "conserve", "hierarchy", "sobolev", "gn",
                           "dmgn", "chain", "cancel"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name +
                                             " experiment");
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed, "seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    gph::ExperimentConfig cfg = gph::parse_config(config_path);
    const std::string sub = app.get_subcommands().front()->get_name();
    if (cfg.experiment != sub) {
      cfg.experiment = sub;
      cfg.validate();
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_set) cfg.seed = seed;
    gph::RunManifest man = gph::run_experiment(cfg);
    std::printf("ok: %zu file(s) in %s (config %s)\n", man.files.size(),
                cfg.out_dir.c_str(), man.config_hash.c_str());
    return gph::kOk;
  } catch (const gph::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code;
  } catch (const gph::CapacityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return gph::kNumericalError;
  } catch (const gph::IntegrationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return gph::kNumericalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return gph::kNumericalError;
  }
}

#pragma once

#include "gph/config.hpp"

namespace gph {

struct RunManifest {
  std::string config_hash;
  std::string code_version;
  std::string started;
  std::string finished;
  std::vector<std::pair<std::string, std::string>> files;  // name, checksum
};

// Dispatches to the experiment pipeline, writes CSV/JSON outputs plus
// manifest.json into c.out_dir.  Returns the manifest; throws ConfigError
// on invalid input and IntegrationError/CapacityError on numerical failure
// (partial outputs are left in place).
RunManifest run_experiment(const ExperimentConfig& c);

extern const char* kVersion;

}  // namespace gph

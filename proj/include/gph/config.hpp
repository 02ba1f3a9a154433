#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gph/inequality.hpp"

namespace gph {

// exit codes used by the CLI
enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kValidationError = 3,
  kNumericalError = 4,
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int code, const std::string& what)
      : std::runtime_error(what), exit_code(code) {}
  int exit_code;
};

struct InitialStateSpec {
  std::string type;  // plane_wave | gaussian | random
  double weight = 1.0;
  std::vector<int> mode;       // plane_wave
  std::vector<double> center;  // gaussian
  double width = 1.0;          // gaussian
  std::uint64_t seed = 0;      // random
  double decay = 2.0;          // random
};

struct ExperimentConfig {
  std::string experiment;  // nls|conserve|hierarchy|sobolev|gn|dmgn|chain|cancel
  int d = 1;
  int n = 64;
  double L = 6.283185307179586476925287;

  int p = 2;
  double mu = 1.0;
  double dt = 1e-3;
  double T = 1.0;
  int K = 2;
  double xi = 0.05;
  double xi_prime = 0.1;
  std::vector<double> alphas;
  double alpha = 0.5;
  int M_max = 8;
  std::string closure = "oracle";  // hierarchy: oracle | zero
  std::string regime = "defocusing";
  int snapshot_every = 0;  // 0: pick per experiment

  std::vector<InitialStateSpec> mixture;

  int sample_q = 2;
  double sample_decay = 2.0;
  int sample_count = 1000;
  int cancel_inputs = 20;  // seeded inputs for the cancel experiment

  std::string out_dir = "results";
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError(kValidationError, ...)
};

// throws ConfigError with kParseError / kValidationError
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& c);

MixtureState build_mixture(const ExperimentConfig& c);
WaveFunction build_state(const Grid& g, const InitialStateSpec& s);

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::string hex64(std::uint64_t v);

}  // namespace gph

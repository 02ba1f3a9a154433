#include "gph/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gph {

using json = nlohmann::json;

namespace {

const std::set<std::string> kExperiments = {
    "nls", "conserve", "hierarchy", "sobolev",
    "gn",  "dmgn",     "chain",     "cancel"};

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw ConfigError(kValidationError, "config field '" + field + "': " + why);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!kExperiments.count(experiment))
    invalid("experiment", "must be one of nls|conserve|hierarchy|sobolev|gn|"
                          "dmgn|chain|cancel");
  if (d != 1 && d != 2) invalid("grid.d", "dimension must be 1 or 2");
  if (!power_of_two(n) || n < 4)
    invalid("grid.n", "points per axis must be a power of two >= 4");
  if (!(L > 0)) invalid("grid.L", "period length must be positive");
  if (p != 2 && p != 4) invalid("params.p", "nonlinearity must be 2 or 4");
  if (!(dt > 0)) invalid("params.dt", "time step must be positive");
  if (!(T >= 0)) invalid("params.T", "horizon must be non-negative");
  if (K < 1) invalid("params.K", "truncation depth must be >= 1");
  if (!(xi > 0 && xi < 1)) invalid("params.xi", "weight must lie in (0,1)");
  if (!(xi_prime > 0 && xi_prime < 1))
    invalid("params.xi_prime", "weight must lie in (0,1)");
  if (M_max < 2) invalid("params.M_max", "series order must be >= 2");
  if (closure != "oracle" && closure != "zero")
    invalid("closure", "must be 'oracle' or 'zero'");
  if (regime != "defocusing" && regime != "focusing")
    invalid("regime", "must be 'defocusing' or 'focusing'");
  const int kp = 1 + p / 2;
  if (experiment == "chain" && regime == "focusing") {
    if (!(alpha * kp < 1.0))
      invalid("params.alpha",
              "focusing chain needs alpha*kp < 1 (L2-subcritical window)");
    if (!(alpha > (kp - 1) * d / (2.0 * kp)))
      invalid("params.alpha",
              "alpha must exceed the restriction threshold (kp-1)d/(2kp)");
    if (!(mu < 0)) invalid("params.mu", "focusing regime needs mu < 0");
  }
  if (experiment == "chain" && regime == "defocusing" && !(mu > 0))
    invalid("params.mu", "defocusing regime needs mu > 0");
  for (std::size_t j = 0; j < mixture.size(); ++j) {
    const auto& s = mixture[j];
    const std::string fld = "mixture[" + std::to_string(j) + "]";
    if (s.type != "plane_wave" && s.type != "gaussian" && s.type != "random")
      invalid(fld + ".type", "must be plane_wave|gaussian|random");
    if (!(s.weight > 0)) invalid(fld + ".weight", "must be positive");
    if (s.type == "plane_wave" && static_cast<int>(s.mode.size()) != d)
      invalid(fld + ".mode", "needs one integer per dimension");
    if (s.type == "gaussian") {
      if (static_cast<int>(s.center.size()) != d)
        invalid(fld + ".center", "needs one coordinate per dimension");
      if (!(s.width > 0)) invalid(fld + ".width", "must be positive");
    }
    if (s.type == "random" && !(s.decay > 0.5 * d))
      invalid(fld + ".decay", "must exceed d/2");
  }
  if (sample_q < 2 || sample_q > 3)
    invalid("sampling.q", "argument count limited to {2,3}");
  if (sample_q == 3 && d != 1)
    invalid("sampling.q", "q=3 sampling is limited to d=1");
  if (!(sample_decay > 0.5 * d)) invalid("sampling.decay", "must exceed d/2");
  if (sample_count < 1) invalid("sampling.count", "must be >= 1");
  if (cancel_inputs < 1) invalid("cancel_inputs", "must be >= 1");
  bool needs_mixture = experiment == "nls" || experiment == "conserve" ||
                       experiment == "hierarchy" || experiment == "chain" ||
                       experiment == "dmgn";
  if (needs_mixture && mixture.empty())
    invalid("mixture", "this experiment needs at least one initial state");
}

namespace {

InitialStateSpec parse_state(const json& j, int d) {
  InitialStateSpec s;
  s.type = j.at("type").get<std::string>();
  s.weight = j.value("weight", 1.0);
  if (j.contains("mode")) {
    if (j["mode"].is_array())
      s.mode = j["mode"].get<std::vector<int>>();
    else
      s.mode = std::vector<int>(d, j["mode"].get<int>());
    if (d == 2 && s.mode.size() == 1) s.mode.push_back(0);
  }
  if (j.contains("center")) {
    if (j["center"].is_array())
      s.center = j["center"].get<std::vector<double>>();
    else
      s.center = std::vector<double>(d, j["center"].get<double>());
  }
  s.width = j.value("width", 1.0);
  s.seed = j.value("seed", 0ULL);
  s.decay = j.value("decay", 2.0);
  return s;
}

json state_json(const InitialStateSpec& s) {
  json j;
  j["type"] = s.type;
  j["weight"] = s.weight;
  if (s.type == "plane_wave") j["mode"] = s.mode;
  if (s.type == "gaussian") {
    j["center"] = s.center;
    j["width"] = s.width;
  }
  if (s.type == "random") {
    j["seed"] = s.seed;
    j["decay"] = s.decay;
  }
  return j;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(kParseError, std::string("config parse error: ") +
                                       e.what());
  }
  ExperimentConfig c;
  try {
    c.experiment = j.at("experiment").get<std::string>();
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      c.d = g.value("d", c.d);
      c.n = g.value("n", c.n);
      c.L = g.value("L", c.L);
    }
    if (j.contains("params")) {
      const auto& p = j["params"];
      c.p = p.value("p", c.p);
      c.mu = p.value("mu", c.mu);
      c.dt = p.value("dt", c.dt);
      c.T = p.value("T", c.T);
      c.K = p.value("K", c.K);
      c.xi = p.value("xi", c.xi);
      c.xi_prime = p.value("xi_prime", c.xi_prime);
      c.alpha = p.value("alpha", c.alpha);
      c.M_max = p.value("M_max", c.M_max);
      if (p.contains("alphas"))
        c.alphas = p["alphas"].get<std::vector<double>>();
    }
    c.closure = j.value("closure", c.closure);
    c.regime = j.value("regime", c.regime);
    c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
    if (j.contains("mixture"))
      for (const auto& m : j["mixture"]) c.mixture.push_back(parse_state(m, c.d));
    if (j.contains("sampling")) {
      const auto& s = j["sampling"];
      c.sample_q = s.value("q", c.sample_q);
      c.sample_decay = s.value("decay", c.sample_decay);
      c.sample_count = s.value("count", c.sample_count);
    }
    c.cancel_inputs = j.value("cancel_inputs", c.cancel_inputs);
    c.out_dir = j.value("out", c.out_dir);
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& e) {
    throw ConfigError(kParseError,
                      std::string("config structure error: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is)
    throw ConfigError(kParseError, "cannot open config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["grid"] = {{"d", c.d}, {"n", c.n}, {"L", c.L}};
  j["params"] = {{"p", c.p},   {"mu", c.mu},
                 {"dt", c.dt}, {"T", c.T},
                 {"K", c.K},   {"xi", c.xi},
                 {"xi_prime", c.xi_prime}, {"alpha", c.alpha},
                 {"M_max", c.M_max}};
  if (!c.alphas.empty()) j["params"]["alphas"] = c.alphas;
  j["closure"] = c.closure;
  j["regime"] = c.regime;
  j["snapshot_every"] = c.snapshot_every;
  json mix = json::array();
  for (const auto& s : c.mixture) mix.push_back(state_json(s));
  j["mixture"] = mix;
  j["sampling"] = {{"q", c.sample_q},
                   {"decay", c.sample_decay},
                   {"count", c.sample_count}};
  j["cancel_inputs"] = c.cancel_inputs;
  j["out"] = c.out_dir;
  j["seed"] = c.seed;
  return j.dump(2);
}

WaveFunction build_state(const Grid& g, const InitialStateSpec& s) {
  if (s.type == "plane_wave") return plane_wave(g, s.mode);
  if (s.type == "gaussian") return gaussian_state(g, s.center, s.width);
  if (s.type == "random") return random_state(g, s.seed, s.decay);
  throw ConfigError(kValidationError, "unknown initial state type " + s.type);
}

MixtureState build_mixture(const ExperimentConfig& c) {
  Grid g = make_grid(c.d, c.n, c.L);
  std::vector<double> w;
  std::vector<WaveFunction> states;
  for (const auto& s : c.mixture) {
    w.push_back(s.weight);
    states.push_back(build_state(g, s));
  }
  return MixtureState(std::move(w), std::move(states));
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

}  // namespace gph

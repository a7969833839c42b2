#include "fracheat/cli/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "fracheat/errors.hpp"

namespace fracheat::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty() || !std::isfinite(x)) throw DomainError("option " + key + ": expected a number, got '" + v + "'");
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw DomainError("option " + key + ": expected a nonnegative integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw DomainError("option " + key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw DomainError("option " + key + ": empty list");
  return out;
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvVar)) {
    try {
      return to_uint(kSeedEnvVar, env);
    } catch (const DomainError&) {
    }
  }
  return kDefaultSeed;
}

std::size_t RunConfig::effective_grid_steps() const {
  if (grid_steps > 0) return grid_steps;
  return static_cast<std::size_t>(std::max(1.0, std::round(model.t_horizon * kDefaultStepsPerUnitTime)));
}

void RunConfig::validate() const {
  model.validate();
  if (moll) moll->validate();
  if (p < 1) throw DomainError("p must be a positive integer");
  if (n_samples < 1) throw DomainError("samples must be positive");
  if (n_max < 0) throw DomainError("nmax must be nonnegative");
  if (workers < 1) throw DomainError("workers must be positive");
  if (realizations < 1) throw DomainError("realizations must be positive");
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(raw_value);
  auto& m = cfg.model;
  if (key == "alpha") {
    m.alpha = to_double(key, v);
  } else if (key == "d") {
    const auto d = static_cast<int>(to_uint(key, v));
    if (d < 1) throw DomainError("d must be >= 1");
    if (m.x_point.size() != static_cast<std::size_t>(d)) m.x_point.assign(static_cast<std::size_t>(d), 0.0);
    m.d = d;
  } else if (key == "t") {
    m.t_horizon = to_double(key, v);
  } else if (key == "x") {
    m.x_point = to_list(key, v);
  } else if (key == "u0") {
    m.u0 = InitialCondition::parse(v);
  } else if (key == "flavor") {
    cfg.flavor = parse_flavor(v);
  } else if (key == "p") {
    cfg.p = static_cast<int>(to_uint(key, v));
  } else if (key == "samples") {
    cfg.n_samples = to_uint(key, v);
  } else if (key == "steps") {
    cfg.grid_steps = to_uint(key, v);
  } else if (key == "eps") {
    if (!cfg.moll) cfg.moll = MollifierParams{};
    cfg.moll->epsilon = to_double(key, v);
  } else if (key == "delta") {
    if (!cfg.moll) cfg.moll = MollifierParams{};
    cfg.moll->delta = to_double(key, v);
  } else if (key == "seed") {
    cfg.seed = to_uint(key, v);
  } else if (key == "nmax") {
    cfg.n_max = static_cast<int>(to_uint(key, v));
  } else if (key == "qmc-points") {
    cfg.chaos.qmc_points = to_uint(key, v);
  } else if (key == "qmc-shifts") {
    cfg.chaos.qmc_shifts = static_cast<int>(to_uint(key, v));
  } else if (key == "mc-samples") {
    cfg.chaos.mc_samples = to_uint(key, v);
  } else if (key == "fourier") {
    cfg.chaos.force_fourier = to_bool(key, v);
  } else if (key == "nspace") {
    cfg.n_space = to_uint(key, v);
  } else if (key == "ntime") {
    cfg.n_time = to_uint(key, v);
  } else if (key == "realizations") {
    cfg.realizations = to_uint(key, v);
  } else if (key == "snapshot-every") {
    cfg.snapshot_every = to_uint(key, v);
  } else if (key == "quick") {
    cfg.quick = to_bool(key, v);
  } else if (key == "workers") {
    cfg.workers = static_cast<unsigned>(to_uint(key, v));
  } else if (key == "output") {
    cfg.output_path = v;
  } else if (key == "csv") {
    cfg.csv_path = v;
  } else if (key == "omit-runtime") {
    cfg.omit_runtime = to_bool(key, v);
  } else {
    throw DomainError("unknown setting '" + key + "'");
  }
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["subcommand"] = cfg.subcommand;
  j["alpha"] = cfg.model.alpha;
  j["d"] = cfg.model.d;
  j["c_alpha"] = cfg.model.c_alpha;
  j["t"] = cfg.model.t_horizon;
  j["x"] = cfg.model.x_point;
  j["u0"] = cfg.model.u0.descriptor();
  j["flavor"] = to_string(cfg.flavor);
  j["p"] = cfg.p;
  j["samples"] = cfg.n_samples;
  j["steps"] = cfg.effective_grid_steps();
  if (cfg.moll) {
    j["eps"] = cfg.moll->epsilon;
    j["delta"] = cfg.moll->delta;
  }
  j["seed"] = cfg.seed;
  j["nmax"] = cfg.n_max;
  j["qmc_points"] = cfg.chaos.qmc_points;
  j["qmc_shifts"] = cfg.chaos.qmc_shifts;
  j["mc_samples"] = cfg.chaos.mc_samples;
  j["fourier"] = cfg.chaos.force_fourier;
  j["nspace"] = cfg.n_space;
  j["ntime"] = cfg.n_time;
  j["realizations"] = cfg.realizations;
  j["snapshot_every"] = cfg.snapshot_every;
  j["quick"] = cfg.quick;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  try {
    cfg.subcommand = j.at("subcommand").get<std::string>();
    cfg.model.alpha = j.at("alpha").get<double>();
    cfg.model.d = j.at("d").get<int>();
    cfg.model.t_horizon = j.at("t").get<double>();
    cfg.model.x_point = j.at("x").get<std::vector<double>>();
    cfg.model.u0 = InitialCondition::parse(j.at("u0").get<std::string>());
    cfg.flavor = parse_flavor(j.at("flavor").get<std::string>());
    cfg.p = j.at("p").get<int>();
    cfg.n_samples = j.at("samples").get<std::size_t>();
    cfg.grid_steps = j.at("steps").get<std::size_t>();
    if (j.contains("eps")) cfg.moll = MollifierParams{j.at("eps").get<double>(), j.at("delta").get<double>()};
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.n_max = j.at("nmax").get<int>();
    cfg.chaos.seed = cfg.seed;
    cfg.chaos.qmc_points = j.at("qmc_points").get<std::size_t>();
    cfg.chaos.qmc_shifts = j.at("qmc_shifts").get<int>();
    cfg.chaos.mc_samples = j.at("mc_samples").get<std::size_t>();
    cfg.chaos.force_fourier = j.at("fourier").get<bool>();
    cfg.n_space = j.at("nspace").get<std::size_t>();
    cfg.n_time = j.at("ntime").get<std::size_t>();
    cfg.realizations = j.at("realizations").get<std::size_t>();
    cfg.snapshot_every = j.at("snapshot_every").get<std::size_t>();
    cfg.quick = j.at("quick").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed run record config: ") + e.what());
  }
  return cfg;
}

}  // namespace fracheat::cli

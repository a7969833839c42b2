#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "fracheat/chaos.hpp"
#include "fracheat/exponent.hpp"
#include "fracheat/feynman_kac.hpp"
#include "fracheat/model.hpp"

namespace fracheat::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240601;
inline constexpr const char* kSeedEnvVar = "FRACHEAT_SEED";

struct RunConfig {
  std::string subcommand;
  ModelParams model;
  Flavor flavor = Flavor::skorohod;
  int p = 1;
  std::size_t n_samples = 10000;
  /// Total time steps of the path grid; 0 means 256 per unit time.
  std::size_t grid_steps = 0;
  std::optional<MollifierParams> moll;
  std::uint64_t seed = kDefaultSeed;
  int n_max = 3;
  ChaosOptions chaos;
  std::size_t n_space = 64;
  std::size_t n_time = 64;
  std::size_t realizations = 100;
  std::size_t snapshot_every = 0;
  bool quick = false;

  // Runtime-only settings; never part of the reproducible record.
  unsigned workers = 1;
  std::string output_path;
  std::string csv_path;
  bool omit_runtime = false;

  std::size_t effective_grid_steps() const;
  /// Checks ranges; regime questions are left to the dispatched command.
  void validate() const;
};

/// Default seed: $FRACHEAT_SEED if set and numeric, else kDefaultSeed.
std::uint64_t default_seed();

/// Applies `key=value` settings (keys as the long flag names). Throws DomainError.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
/// Flat key=value text, `#` comments, blank lines ignored.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Reproducible part of the configuration.
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

}  // namespace fracheat::cli

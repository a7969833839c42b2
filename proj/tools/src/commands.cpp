#include "fracheat/cli/commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "fracheat/chaos.hpp"
#include "fracheat/cli/validation.hpp"
#include "fracheat/csv.hpp"
#include "fracheat/direct_solver.hpp"
#include "fracheat/errors.hpp"
#include "fracheat/feynman_kac.hpp"
#include "fracheat/version.hpp"

namespace fracheat::cli {

namespace {

using json = nlohmann::json;

json estimate_json(const MomentEstimate& e) {
  return {{"value", e.value},       {"std_error", e.std_error}, {"n_samples", e.n_samples}, {"p", e.p_order},
          {"flavor", to_string(e.flavor)}, {"seed", e.seed},   {"grid_steps", e.grid_steps}};
}

json term_json(const ChaosTerm& t) {
  return {{"n", t.n}, {"value", t.value}, {"mc_error", t.mc_error}, {"method", to_string(t.method)}};
}

RunRecord make_record(const RunConfig& cfg, json results) {
  RunRecord r;
  r["version"] = kVersion;
  r["subcommand"] = cfg.subcommand;
  r["config"] = config_to_json(cfg);
  r["results"] = std::move(results);
  return r;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot open '" + path + "' for writing");
  return os;
}

MonteCarloSetup setup_for(const RunConfig& cfg) {
  MonteCarloSetup mc;
  mc.p = cfg.p;
  mc.n_samples = cfg.n_samples;
  mc.grid = TimeGrid::uniform(cfg.model.t_horizon, cfg.effective_grid_steps());
  mc.seed = cfg.seed;
  mc.workers = cfg.workers;
  return mc;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

RunConfig load_config_file(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw DomainError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j.contains("config") ? j.at("config") : j);
  }
  RunConfig cfg;
  cfg.seed = default_seed();
  for (const auto& [k, v] : parse_config_text(text)) apply_setting(cfg, k, v);
  return cfg;
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

RunRecord cmd_moment(const RunConfig& cfg) {
  cfg.validate();
  const auto mc = setup_for(cfg);
  json results;
  if (cfg.moll) {
    if (cfg.flavor != Flavor::stratonovich) {
      throw DomainError("mollified moments are defined for the Stratonovich flavor only");
    }
    const auto e = strat_moment_mollified(cfg.model, mc, *cfg.moll);
    results = estimate_json(e);
    results["mollified"] = true;
    return make_record(cfg, results);
  }
  MomentEstimate e;
  std::vector<SampleExponents> samples;
  if (cfg.flavor == Flavor::stratonovich) {
    // Regime is checked before sampling so that d >= 2 fails fast.
    if (cfg.model.d != 1) throw RegimeError(regime::kStratonovichNeedsD1, "Stratonovich moments exist only for d = 1");
    samples = fk_sample_exponents(cfg.model, mc, true);
  } else {
    if (!existence_check(cfg.model.alpha, cfg.model.d).exists) {
      throw RegimeError(regime::kSkorohodNeedsDLt2PlusAlpha, "Skorohod moments need d < 2 + alpha");
    }
    samples = fk_sample_exponents(cfg.model, mc, false);
  }
  e = moment_from_exponents(samples, mc, cfg.flavor);
  results = estimate_json(e);
  if (!cfg.csv_path.empty()) {
    auto os = open_output(cfg.csv_path);
    csv::write_header(os, {"sample", "u0_weight", "self_sum", "cross_sum"});
    for (std::size_t i = 0; i < samples.size(); ++i) {
      csv::write_row(os, {static_cast<double>(i), samples[i].u0_weight, samples[i].self_sum, samples[i].cross_sum});
    }
  }
  return make_record(cfg, results);
}

RunRecord cmd_chaos(const RunConfig& cfg) {
  cfg.validate();
  ChaosOptions co = cfg.chaos;
  co.seed = cfg.seed;
  const auto s = chaos_second_moment(cfg.model.alpha, cfg.model.d, cfg.model.t_horizon, cfg.n_max, cfg.model.u0, co);
  json terms = json::array();
  for (const auto& t : s.terms) terms.push_back(term_json(t));
  return make_record(cfg, {{"terms", terms}, {"value", s.value}, {"mc_error", s.mc_error}, {"tail", s.tail}});
}

RunRecord cmd_check(const RunConfig& cfg) {
  cfg.validate();
  const auto r = existence_check(cfg.model.alpha, cfg.model.d);
  json results = {{"alpha", r.alpha},
                  {"d", r.d},
                  {"p", r.p_choice},
                  {"q", r.q_choice},
                  {"d_lt_2q", r.cond_d_lt_2q},
                  {"d_lt_4pq_over_alpha", r.cond_d_lt_4pqa},
                  {"d_lt_p_alpha_over_2", r.cond_d_lt_pa2},
                  {"exists", r.exists},
                  {"stratonovich_exists", cfg.model.d == 1}};
  if (r.exists) results["series_bound_constant"] = series_bound_constant(cfg.model.alpha, cfg.model.d);
  return make_record(cfg, results);
}

RunRecord cmd_solve(const RunConfig& cfg) {
  cfg.validate();
  const double eps = cfg.moll ? cfg.moll->epsilon : MollifierParams{}.epsilon;
  const auto grid = TorusGrid::make(cfg.model.t_horizon, cfg.n_space, cfg.n_time, cfg.model.x_point.at(0));
  const auto e = ensemble_moment(grid, cfg.model, eps, cfg.p, cfg.realizations, cfg.seed, cfg.workers);
  json results = estimate_json(e);
  results["epsilon"] = eps;
  results["delta"] = grid.dt();
  results["half_length"] = grid.half_length;
  if (!cfg.csv_path.empty()) {
    // Realization 0 of the ensemble, on the same stream.
    RngStream rng(cfg.seed, 0);
    const auto states = solve_realization(grid, cfg.model, eps, rng, cfg.snapshot_every);
    auto os = open_output(cfg.csv_path);
    write_snapshots_csv(os, grid, states);
    results["snapshots"] = states.size();
  }
  return make_record(cfg, results);
}

RunRecord cmd_validate(const RunConfig& cfg, std::ostream& log) {
  SuiteOptions opt;
  opt.scale = cfg.quick ? SuiteScale::quick : SuiteScale::full;
  opt.workers = cfg.workers;
  opt.seed = cfg.seed;
  auto checks = run_acceptance(opt, &log);
  const auto inv = invariant_checks(opt, &log);
  checks.insert(checks.end(), inv.begin(), inv.end());
  json rows = json::array();
  json seconds = json::object();
  bool all = true;
  for (const auto& c : checks) {
    rows.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"measured", c.measured},
                    {"requirement", c.requirement}});
    seconds[c.id] = c.seconds;
    all = all && c.pass;
  }
  auto rec = make_record(cfg, {{"checks", rows}, {"all_pass", all}});
  rec["runtime"]["check_seconds"] = seconds;
  return rec;
}

RunRecord dispatch(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  if (cfg.subcommand == "moment") {
    rec = cmd_moment(cfg);
  } else if (cfg.subcommand == "chaos") {
    rec = cmd_chaos(cfg);
  } else if (cfg.subcommand == "check") {
    rec = cmd_check(cfg);
  } else if (cfg.subcommand == "solve") {
    rec = cmd_solve(cfg);
  } else if (cfg.subcommand == "validate") {
    rec = cmd_validate(cfg, log);
  } else {
    throw DomainError("unknown subcommand '" + cfg.subcommand + "'");
  }
  if (cfg.omit_runtime) {
    rec.erase("runtime");
  } else {
    rec["runtime"]["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec["runtime"]["workers"] = cfg.workers;
  }
  return rec;
}

RunRecord reproducible_part(const RunRecord& record) {
  RunRecord r = record;
  r.erase("runtime");
  return r;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo, chaos and direct solvers for the heat equation with fractional diffusion and "
               "multiplicative Gaussian noise"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  struct Setting {
    const char* key;
    const char* help;
    bool flag;
  };
  static const Setting settings[] = {
      {"alpha", "stability index in (0, 2]", false},
      {"d", "spatial dimension", false},
      {"t", "time horizon", false},
      {"x", "evaluation point, comma separated", false},
      {"u0", "initial condition: const:<c>, gauss:<amp>,<width>, cos:<k>", false},
      {"flavor", "strat or sko", false},
      {"p", "moment order", false},
      {"samples", "Monte Carlo samples", false},
      {"steps", "time steps (default 256 per unit time)", false},
      {"eps", "spatial mollifier scale", false},
      {"delta", "time mollifier window", false},
      {"seed", "master seed", false},
      {"nmax", "highest chaos order", false},
      {"qmc-points", "QMC points per shift", false},
      {"qmc-shifts", "random shifts", false},
      {"mc-samples", "Fourier Monte Carlo samples", false},
      {"fourier", "force the Fourier Monte Carlo route", true},
      {"nspace", "spatial grid points (power of two)", false},
      {"ntime", "time steps of the direct solver", false},
      {"realizations", "direct solver realizations", false},
      {"snapshot-every", "snapshot stride for --csv", false},
      {"quick", "reduced validation scale", true},
      {"workers", "worker threads", false},
      {"output", "write the JSON record here too", false},
      {"csv", "per-sample or snapshot CSV path", false},
      {"omit-runtime", "drop wall time and workers from the record", true},
  };

  std::map<std::string, std::string> given;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  std::string chosen;
  static const std::pair<const char*, const char*> subcommands[] = {
      {"moment", "Feynman-Kac Monte Carlo moment E u(t,x)^p"},
      {"chaos", "chaos terms of the second moment"},
      {"check", "existence report for (alpha, d)"},
      {"solve", "direct split-step solver ensemble"},
      {"validate", "acceptance criteria and module invariants"},
  };
  for (const auto& [name, description] : subcommands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "key=value file or JSON run record");
    for (const auto& s : settings) {
      const std::string flag = std::string("--") + s.key;
      if (s.flag) {
        options[std::string(name) + s.key] = sub->add_flag(flag, s.help);
      } else {
        options[std::string(name) + s.key] = sub->add_option(flag, given[s.key], s.help);
      }
    }
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kConfigError;
  }

  RunRecord rec;
  try {
    RunConfig cfg;
    cfg.seed = default_seed();
    if (!config_path.empty()) cfg = load_config_file(config_path);
    cfg.subcommand = chosen;
    for (const auto& s : settings) {
      const auto* opt = options.at(chosen + s.key);
      if (opt->count() == 0) continue;
      apply_setting(cfg, s.key, s.flag ? "true" : given.at(s.key));
    }
    cfg.chaos.seed = cfg.seed;
    rec = dispatch(cfg, err);
    out << rec.dump(2) << '\n';
    if (!cfg.output_path.empty()) open_output(cfg.output_path) << rec.dump(2) << '\n';
    if (chosen == "validate" && !rec["results"]["all_pass"].get<bool>()) return kFailure;
    return kOk;
  } catch (const RegimeError& e) {
    auto j = error_json("regime", e.what());
    j["error"]["condition"] = e.condition();
    err << j.dump(2) << '\n';
    return kRegimeError;
  } catch (const NumericalError& e) {
    auto j = error_json("numerical", e.what());
    j["error"]["min_eigenvalue"] = e.min_eigenvalue();
    err << j.dump(2) << '\n';
    return kNumericalError;
  } catch (const DomainError& e) {
    err << error_json("config", e.what()).dump(2) << '\n';
    return kConfigError;
  } catch (const BudgetError& e) {
    err << error_json("budget", e.what()).dump(2) << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << error_json("numerical", e.what()).dump(2) << '\n';
    return kNumericalError;
  }
}

}  // namespace fracheat::cli

// SPDX-License-Identifier: Apache-2.0
//
// risest - structured-sparse channel estimation for RIS-assisted mmWave MIMO
// Copyright (C) 2026 The risest project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "risest/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "risest/serialize.hpp"

namespace risest {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

std::uint64_t parse_u64(const std::string& value, const std::string& what) {
  try {
    std::size_t used = 0;
    if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
    const std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a nonnegative integer, got '" + value + "'");
  }
}

double parse_f64(const std::string& value, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a number, got '" + value + "'");
  }
}

std::vector<double> parse_value_list(const std::string& csv, const std::string& what) {
  std::vector<double> values;
  for (const std::string& part : split_csv(csv)) {
    if (!part.empty()) values.push_back(parse_f64(part, what));
  }
  if (values.empty()) throw ConfigError(what + ": list is empty");
  return values;
}

std::vector<arma::uword> parse_count_list(const std::string& csv, const std::string& what) {
  std::vector<arma::uword> values;
  for (const std::string& part : split_csv(csv)) {
    if (!part.empty()) values.push_back(parse_u64(part, what));
  }
  if (values.empty()) throw ConfigError(what + ": list is empty");
  return values;
}

std::vector<Algorithm> parse_algorithms(const std::string& csv) {
  std::vector<Algorithm> algos;
  for (const std::string& part : split_csv(csv)) {
    if (part.empty()) continue;
    const auto a = algorithm_from_name(part);
    if (!a) throw ConfigError("algorithms: unknown algorithm '" + part + "'");
    algos.push_back(*a);
  }
  if (algos.empty()) throw ConfigError("algorithms: list is empty");
  return algos;
}

SweepAxis parse_axis(const std::string& name) {
  const auto axis = sweep_axis_from_name(name);
  if (!axis) throw ConfigError("axis: unknown axis '" + name + "'");
  return *axis;
}

Scenario parse_scenario(const std::string& value) {
  if (value == "1") return Scenario::One;
  if (value == "2") return Scenario::Two;
  throw ConfigError("scenario: expected 1 or 2, got '" + value + "'");
}

// All recognized config-file keys, mapped onto their setters.
using KeyHandler = std::function<void(CliConfig&, const std::string&)>;

const std::map<std::string, KeyHandler>& key_handlers() {
  static const std::map<std::string, KeyHandler> handlers = {
      {"bs_rows", [](CliConfig& c, const std::string& v) { c.system.bs_rows = parse_u64(v, "bs_rows"); }},
      {"bs_cols", [](CliConfig& c, const std::string& v) { c.system.bs_cols = parse_u64(v, "bs_cols"); }},
      {"ris_rows", [](CliConfig& c, const std::string& v) { c.system.ris_rows = parse_u64(v, "ris_rows"); }},
      {"ris_cols", [](CliConfig& c, const std::string& v) { c.system.ris_cols = parse_u64(v, "ris_cols"); }},
      {"users", [](CliConfig& c, const std::string& v) { c.system.users = parse_u64(v, "users"); }},
      {"pilots", [](CliConfig& c, const std::string& v) { c.system.pilots = parse_u64(v, "pilots"); }},
      {"paths_bs_ris", [](CliConfig& c, const std::string& v) { c.system.paths_bs_ris = parse_u64(v, "paths_bs_ris"); }},
      {"paths_ris_user", [](CliConfig& c, const std::string& v) { c.system.paths_ris_user = parse_u64(v, "paths_ris_user"); }},
      {"common_columns", [](CliConfig& c, const std::string& v) { c.system.common_columns = parse_u64(v, "common_columns"); }},
      {"clusters", [](CliConfig& c, const std::string& v) { c.system.clusters = parse_u64(v, "clusters"); }},
      {"cross_cluster_prob", [](CliConfig& c, const std::string& v) { c.system.cross_cluster_prob = parse_f64(v, "cross_cluster_prob"); }},
      {"snr_db", [](CliConfig& c, const std::string& v) { c.system.snr_db = parse_f64(v, "snr_db"); }},
      {"dist_bs_ris", [](CliConfig& c, const std::string& v) { c.system.dist_bs_ris = parse_f64(v, "dist_bs_ris"); }},
      {"dist_ris_user", [](CliConfig& c, const std::string& v) { c.system.dist_ris_user = parse_f64(v, "dist_ris_user"); }},
      {"exp_bs_ris", [](CliConfig& c, const std::string& v) { c.system.exp_bs_ris = parse_f64(v, "exp_bs_ris"); }},
      {"exp_ris_user", [](CliConfig& c, const std::string& v) { c.system.exp_ris_user = parse_f64(v, "exp_ris_user"); }},
      {"scenario", [](CliConfig& c, const std::string& v) { c.system.scenario = parse_scenario(v); }},
      {"seed", [](CliConfig& c, const std::string& v) { c.system.seed = parse_u64(v, "seed"); }},
      {"threshold", [](CliConfig& c, const std::string& v) { c.hyper.threshold = parse_f64(v, "threshold"); }},
      {"max_iterations", [](CliConfig& c, const std::string& v) { c.hyper.max_iterations = parse_u64(v, "max_iterations"); }},
      {"fast_scan_iteration", [](CliConfig& c, const std::string& v) { c.hyper.fast_scan_iteration = parse_u64(v, "fast_scan_iteration"); }},
      {"v1", [](CliConfig& c, const std::string& v) { c.hyper.v1 = parse_f64(v, "v1"); }},
      {"v2", [](CliConfig& c, const std::string& v) { c.hyper.v2 = parse_f64(v, "v2"); }},
      {"algorithms", [](CliConfig& c, const std::string& v) { c.algorithms = parse_algorithms(v); }},
      {"axis", [](CliConfig& c, const std::string& v) { c.axis = parse_axis(v); }},
      {"values", [](CliConfig& c, const std::string& v) { c.axis_values = parse_value_list(v, "values"); }},
      {"bench_paths", [](CliConfig& c, const std::string& v) { c.bench_paths = parse_count_list(v, "bench_paths"); }},
      {"trials", [](CliConfig& c, const std::string& v) { c.trials = parse_u64(v, "trials"); }},
      {"out", [](CliConfig& c, const std::string& v) { c.out_path = v; }},
  };
  return handlers;
}

std::string csv_of_values(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += format_double(values[i]);
  }
  return s;
}

std::string csv_of_algorithms(const std::vector<Algorithm>& algos) {
  std::string s;
  for (std::size_t i = 0; i < algos.size(); ++i) {
    if (i) s += ',';
    s += algorithm_name(algos[i]);
  }
  return s;
}

std::string csv_of_counts(const std::vector<arma::uword>& counts) {
  std::string s;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(counts[i]);
  }
  return s;
}

// Draws the trial-0 dataset for the resolved config.
TrialDump draw_dump(const CliConfig& cli) {
  const SystemConfig& cfg = cli.system;
  Rng trial_rng(cfg.seed, 0);
  Rng paths_rng = trial_rng.fork(0);
  Rng schedule_rng = trial_rng.fork(1);
  Rng noise_rng = trial_rng.fork(2);

  const UnitaryDictionary bs_dict = dft_dictionary(cfg.bs_rows, cfg.bs_cols);
  const UnitaryDictionary ris_dict = dft_dictionary(cfg.ris_rows, cfg.ris_cols);

  TrialDump dump;
  dump.config = cfg;
  const PathEnsemble paths = sample_paths(cfg, paths_rng);
  dump.realization = assemble_channels(paths, cfg, bs_dict, ris_dict);
  const RisSchedule schedule = make_ris_schedule(cfg.ris_elements(), cfg.pilots, schedule_rng);
  const double sigma2 = calibrate_noise(cfg.snr_db, dump.realization, schedule);
  const auto raw = observe(dump.realization, schedule, sigma2, noise_rng);
  dump.measurements = to_cs_model(raw, schedule, bs_dict, ris_dict);
  return dump;
}

void write_text_output(const CliConfig& cli, const std::string& text, std::ostream& out) {
  if (cli.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream os(cli.out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + cli.out_path + " for writing");
  os << text;
}

int cmd_generate(const CliConfig& cli, std::ostream& err) {
  const std::string path = cli.out_path.empty() ? "risest_dump.bin" : cli.out_path;
  save_dump(path, draw_dump(cli));
  err << "wrote " << path << "\n";
  return 0;
}

int cmd_estimate(const CliConfig& cli, std::ostream& out) {
  TrialDump dump;
  SystemConfig cfg = cli.system;
  if (!cli.in_path.empty()) {
    dump = load_dump(cli.in_path);
    cfg = dump.config;
  } else {
    dump = draw_dump(cli);
  }

  for (Algorithm a : cli.algorithms) {
    EstimateResult est;
    switch (a) {
      case Algorithm::Pci:
      case Algorithm::PciFixed:
      case Algorithm::PciAuto: {
        const auto rows = acquire_row_support(dump.measurements.observations, cfg.paths_bs_ris);
        CommonColumnMode mode;
        if (a == Algorithm::PciFixed) {
          mode = CommonColumnMode::FixedPc;
        } else if (a == Algorithm::PciAuto) {
          mode = CommonColumnMode::AutoCluster;
        } else {
          mode = cfg.scenario == Scenario::One ? CommonColumnMode::FixedPc
                                               : CommonColumnMode::AutoCluster;
        }
        est = uampsbl_pci(dump.measurements, cfg, cli.hyper, rows, mode);
        break;
      }
      case Algorithm::UampSbl:
        est = uamp_sbl_channel(dump.measurements, cli.hyper);
        break;
      case Algorithm::Omp:
        est = omp_baseline(dump.measurements, cfg.paths_ris_user, 1e-3);
        break;
      case Algorithm::OracleLs:
        est = oracle_ls(dump.measurements, dump.realization);
        break;
    }
    out << algorithm_name(a) << " nmse " << format_double(nmse(est.angular, dump.realization))
        << "\n";
  }
  return 0;
}

int cmd_sweep(const CliConfig& cli, std::ostream& out) {
  const SweepReport report =
      sweep(cli.system, cli.hyper, cli.axis, cli.axis_values, cli.trials, cli.algorithms);
  write_text_output(cli, report.to_csv(), out);
  return 0;
}

int cmd_bench(const CliConfig& cli, std::ostream& out) {
  const SweepReport report =
      bench_complexity(cli.system, cli.hyper, cli.bench_paths, cli.trials);
  write_text_output(cli, report.to_csv(), out);
  return 0;
}

}  // namespace

void CliConfig::validate() const {
  try {
    system.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  if (hyper.threshold <= 0.0) throw ConfigError("threshold must be positive");
  if (hyper.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (hyper.fast_scan_iteration < 1) throw ConfigError("fast_scan_iteration must be at least 1");
  if (hyper.max_iterations < hyper.fast_scan_iteration) {
    throw ConfigError("max_iterations must be at least fast_scan_iteration");
  }
  if (hyper.v1 <= 1.0 || hyper.v2 <= 1.0) throw ConfigError("v1 and v2 must exceed 1");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (axis_values.empty()) throw ConfigError("values must be nonempty");
  if (algorithms.empty()) throw ConfigError("algorithms must be nonempty");
}

CliConfig parse_config_file(const std::string& path, CliConfig base) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config file not found: " + path);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(is, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto handler = key_handlers().find(key);
    if (handler == key_handlers().end()) {
      throw ConfigError(path + ":" + std::to_string(line_number) + ": unknown key '" + key + "'");
    }
    try {
      handler->second(base, value);
    } catch (const ConfigError& err) {
      throw ConfigError(path + ":" + std::to_string(line_number) + ": " + err.what());
    }
  }
  return base;
}

void log_resolved_config(const CliConfig& cfg, const std::string& subcommand, std::ostream& os) {
  os << "# resolved configuration (" << subcommand << ")\n";
  os << "bs_rows = " << cfg.system.bs_rows << "\n";
  os << "bs_cols = " << cfg.system.bs_cols << "\n";
  os << "ris_rows = " << cfg.system.ris_rows << "\n";
  os << "ris_cols = " << cfg.system.ris_cols << "\n";
  os << "users = " << cfg.system.users << "\n";
  os << "pilots = " << cfg.system.pilots << "\n";
  os << "paths_bs_ris = " << cfg.system.paths_bs_ris << "\n";
  os << "paths_ris_user = " << cfg.system.paths_ris_user << "\n";
  os << "common_columns = " << cfg.system.common_columns << "\n";
  os << "clusters = " << cfg.system.clusters << "\n";
  os << "cross_cluster_prob = " << format_double(cfg.system.cross_cluster_prob) << "\n";
  os << "snr_db = " << format_double(cfg.system.snr_db) << "\n";
  os << "dist_bs_ris = " << format_double(cfg.system.dist_bs_ris) << "\n";
  os << "dist_ris_user = " << format_double(cfg.system.dist_ris_user) << "\n";
  os << "exp_bs_ris = " << format_double(cfg.system.exp_bs_ris) << "\n";
  os << "exp_ris_user = " << format_double(cfg.system.exp_ris_user) << "\n";
  os << "scenario = " << (cfg.system.scenario == Scenario::One ? 1 : 2) << "\n";
  os << "seed = " << cfg.system.seed << "\n";
  os << "threshold = " << format_double(cfg.hyper.threshold) << "\n";
  os << "max_iterations = " << cfg.hyper.max_iterations << "\n";
  os << "fast_scan_iteration = " << cfg.hyper.fast_scan_iteration << "\n";
  os << "v1 = " << format_double(cfg.hyper.v1) << "\n";
  os << "v2 = " << format_double(cfg.hyper.v2) << "\n";
  os << "algorithms = " << csv_of_algorithms(cfg.algorithms) << "\n";
  os << "axis = " << sweep_axis_name(cfg.axis) << "\n";
  os << "values = " << csv_of_values(cfg.axis_values) << "\n";
  os << "bench_paths = " << csv_of_counts(cfg.bench_paths) << "\n";
  os << "trials = " << cfg.trials << "\n";
  os << "out = " << cfg.out_path << "\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"structured-sparse cascaded channel estimation for RIS-assisted mmWave MIMO"};
  app.require_subcommand(1);

  std::string config_path, axis_name, values_csv, algorithms_csv, paths_csv, scenario_str;
  std::string out_path, in_path;
  std::uint64_t seed = 0, users = 0, pilots = 0, trials = 0;
  double snr_db = 0.0;
  bool full_scale = false;

  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--seed", seed, "root seed");
  app.add_option("--users", users, "number of users");
  app.add_option("--pilots", pilots, "pilot time slots");
  app.add_option("--snr-db", snr_db, "signal-to-noise ratio in dB");
  app.add_option("--scenario", scenario_str, "sharing scenario: 1 or 2");
  app.add_option("--axis", axis_name, "sweep axis name");
  app.add_option("--values", values_csv, "comma-separated axis values");
  app.add_option("--trials", trials, "trials per axis value");
  app.add_option("--algorithms", algorithms_csv, "comma-separated algorithm list");
  app.add_option("--paths", paths_csv, "comma-separated path counts (bench)");
  app.add_option("--out", out_path, "output path (default: stdout)");
  app.add_option("--in", in_path, "input dump (estimate)");
  app.add_flag("--full-scale", full_scale, "reset dimensioning to the full-scale defaults");

  CLI::App* c_generate = app.add_subcommand("generate", "draw and dump one realization");
  CLI::App* c_estimate = app.add_subcommand("estimate", "run estimators and print NMSE");
  CLI::App* c_sweep = app.add_subcommand("sweep", "NMSE sweep over an axis, CSV output");
  CLI::App* c_bench = app.add_subcommand("bench", "estimator runtime vs path count, CSV output");
  for (CLI::App* sub : {c_generate, c_estimate, c_sweep, c_bench}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  CliConfig cli;
  try {
    if (!config_path.empty()) cli = parse_config_file(config_path, cli);
    if (full_scale) {
      const SystemConfig paper_defaults;
      cli.system.bs_rows = paper_defaults.bs_rows;
      cli.system.bs_cols = paper_defaults.bs_cols;
      cli.system.ris_rows = paper_defaults.ris_rows;
      cli.system.ris_cols = paper_defaults.ris_cols;
      cli.system.users = paper_defaults.users;
      cli.system.pilots = paper_defaults.pilots;
    }
    // explicit flags win over the file
    if (app.count("--seed")) cli.system.seed = seed;
    if (app.count("--users")) cli.system.users = users;
    if (app.count("--pilots")) cli.system.pilots = pilots;
    if (app.count("--snr-db")) cli.system.snr_db = snr_db;
    if (app.count("--scenario")) cli.system.scenario = parse_scenario(scenario_str);
    if (app.count("--axis")) cli.axis = parse_axis(axis_name);
    if (app.count("--values")) cli.axis_values = parse_value_list(values_csv, "values");
    if (app.count("--trials")) cli.trials = trials;
    if (app.count("--algorithms")) cli.algorithms = parse_algorithms(algorithms_csv);
    if (app.count("--paths")) cli.bench_paths = parse_count_list(paths_csv, "paths");
    if (app.count("--out")) cli.out_path = out_path;
    if (app.count("--in")) cli.in_path = in_path;
    cli.validate();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 1;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  log_resolved_config(cli, subcommand, err);

  try {
    if (subcommand == "generate") return cmd_generate(cli, err);
    if (subcommand == "estimate") return cmd_estimate(cli, out);
    if (subcommand == "sweep") return cmd_sweep(cli, out);
    if (subcommand == "bench") return cmd_bench(cli, out);
    err << "error: unknown subcommand\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace risest

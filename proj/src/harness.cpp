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

#include "risest/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace risest {

namespace {

// Sub-stream tags for the independent draws inside one trial.
enum StreamTag : std::uint64_t { kPathsStream = 0, kScheduleStream = 1, kNoiseStream = 2 };

double mean_iterations(const std::vector<arma::uword>& iterations) {
  if (iterations.empty()) return 0.0;
  double total = 0.0;
  for (arma::uword it : iterations) total += static_cast<double>(it);
  return total / static_cast<double>(iterations.size());
}

CommonColumnMode mode_for(Algorithm a, const SystemConfig& cfg) {
  switch (a) {
    case Algorithm::PciFixed:
      return CommonColumnMode::FixedPc;
    case Algorithm::PciAuto:
      return CommonColumnMode::AutoCluster;
    default:
      return cfg.scenario == Scenario::One ? CommonColumnMode::FixedPc
                                           : CommonColumnMode::AutoCluster;
  }
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Pci:
      return "pci";
    case Algorithm::PciFixed:
      return "pci_fixed";
    case Algorithm::PciAuto:
      return "pci_auto";
    case Algorithm::UampSbl:
      return "uamp_sbl";
    case Algorithm::Omp:
      return "omp";
    case Algorithm::OracleLs:
      return "oracle_ls";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
  if (name == "pci") return Algorithm::Pci;
  if (name == "pci_fixed") return Algorithm::PciFixed;
  if (name == "pci_auto") return Algorithm::PciAuto;
  if (name == "uamp_sbl") return Algorithm::UampSbl;
  if (name == "omp") return Algorithm::Omp;
  if (name == "oracle_ls") return Algorithm::OracleLs;
  return std::nullopt;
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Pilots:
      return "pilots";
    case SweepAxis::SnrDb:
      return "snr_db";
    case SweepAxis::Users:
      return "users";
    case SweepAxis::RisSize:
      return "ris_size";
    case SweepAxis::BsSize:
      return "bs_size";
    case SweepAxis::CommonColumns:
      return "common_columns";
    case SweepAxis::PathsPerUser:
      return "paths_per_user";
  }
  return "unknown";
}

std::optional<SweepAxis> sweep_axis_from_name(const std::string& name) {
  if (name == "pilots") return SweepAxis::Pilots;
  if (name == "snr_db") return SweepAxis::SnrDb;
  if (name == "users") return SweepAxis::Users;
  if (name == "ris_size") return SweepAxis::RisSize;
  if (name == "bs_size") return SweepAxis::BsSize;
  if (name == "common_columns") return SweepAxis::CommonColumns;
  if (name == "paths_per_user") return SweepAxis::PathsPerUser;
  return std::nullopt;
}

double nmse(const std::vector<arma::cx_mat>& estimate, const ChannelRealization& truth) {
  if (estimate.size() != truth.angular.size() || estimate.empty()) {
    throw std::invalid_argument("nmse: user counts do not match");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < estimate.size(); ++j) {
    const double ref = std::pow(arma::norm(truth.angular[j], "fro"), 2);
    if (ref <= 0.0) throw std::invalid_argument("nmse: true channel has zero norm");
    total += std::pow(arma::norm(estimate[j] - truth.angular[j], "fro"), 2) / ref;
  }
  return total / static_cast<double>(estimate.size());
}

TrialResult run_trial(const SystemConfig& cfg, const SblHyperparams& hp,
                      const std::vector<Algorithm>& algorithms, arma::uword trial_index) {
  cfg.validate();
  TrialResult result;
  result.seed = cfg.seed;
  result.trial_index = trial_index;

  try {
    Rng trial_rng(cfg.seed, trial_index);
    Rng paths_rng = trial_rng.fork(kPathsStream);
    Rng schedule_rng = trial_rng.fork(kScheduleStream);
    Rng noise_rng = trial_rng.fork(kNoiseStream);

    const UnitaryDictionary bs_dict = dft_dictionary(cfg.bs_rows, cfg.bs_cols);
    const UnitaryDictionary ris_dict = dft_dictionary(cfg.ris_rows, cfg.ris_cols);

    const PathEnsemble paths = sample_paths(cfg, paths_rng);
    const ChannelRealization realization = assemble_channels(paths, cfg, bs_dict, ris_dict);
    const RisSchedule schedule = make_ris_schedule(cfg.ris_elements(), cfg.pilots, schedule_rng);
    const double sigma2 = calibrate_noise(cfg.snr_db, realization, schedule);
    const auto raw = observe(realization, schedule, sigma2, noise_rng);
    const MeasurementSet ms = to_cs_model(raw, schedule, bs_dict, ris_dict);

    for (Algorithm a : algorithms) {
      const auto start = std::chrono::steady_clock::now();
      EstimateResult est;
      switch (a) {
        case Algorithm::Pci:
        case Algorithm::PciFixed:
        case Algorithm::PciAuto: {
          const auto rows = acquire_row_support(ms.observations, cfg.paths_bs_ris);
          est = uampsbl_pci(ms, cfg, hp, rows, mode_for(a, cfg));
          break;
        }
        case Algorithm::UampSbl:
          est = uamp_sbl_channel(ms, hp);
          break;
        case Algorithm::Omp:
          est = omp_baseline(ms, cfg.paths_ris_user, 1e-3);
          break;
        case Algorithm::OracleLs:
          est = oracle_ls(ms, realization);
          break;
      }
      const auto stop = std::chrono::steady_clock::now();

      TrialResult::Entry entry;
      entry.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      entry.nmse = nmse(est.angular, realization);
      entry.iters_mean = mean_iterations(est.iterations);
      result.results[a] = entry;
    }
  } catch (const std::exception& err) {
    throw std::runtime_error("trial " + std::to_string(trial_index) + ": " + err.what());
  }
  return result;
}

unsigned worker_count() {
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (const char* env = std::getenv("RIS_EST_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < workers) workers = static_cast<unsigned>(cap);
  }
  return workers;
}

void parallel_for(arma::uword count, const std::function<void(arma::uword)>& fn) {
  const unsigned workers = std::min<arma::uword>(worker_count(), count);
  if (workers <= 1) {
    for (arma::uword i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<arma::uword> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const arma::uword i = next.fetch_add(1);
        if (i >= count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

std::string SweepReport::to_csv() const {
  std::string csv = "axis,axis_value,algorithm,nmse_mean,nmse_stderr,trials,runtime_ms_mean,iters_mean\n";
  for (const Row& row : rows) {
    csv += sweep_axis_name(axis);
    csv += ',';
    csv += format_double(row.axis_value);
    csv += ',';
    csv += algorithm_name(row.algorithm);
    csv += ',';
    csv += format_double(row.nmse_mean);
    csv += ',';
    csv += format_double(row.nmse_stderr);
    csv += ',';
    csv += std::to_string(row.trials);
    csv += ',';
    csv += format_double(row.runtime_ms_mean);
    csv += ',';
    csv += format_double(row.iters_mean);
    csv += '\n';
  }
  return csv;
}

namespace {

SweepReport sweep_impl(SystemConfig cfg, const SblHyperparams& hp, SweepAxis axis,
                       const std::vector<double>& values, arma::uword trials,
                       const std::vector<Algorithm>& algorithms, bool keep_runtime) {
  if (values.empty()) throw std::invalid_argument("sweep: values must be nonempty");
  if (trials < 1) throw std::invalid_argument("sweep: trials must be at least 1");
  if (algorithms.empty()) throw std::invalid_argument("sweep: no algorithms selected");

  SweepReport report;
  report.axis = axis;

  for (double value : values) {
    SystemConfig point = cfg;
    switch (axis) {
      case SweepAxis::Pilots:
        point.pilots = static_cast<arma::uword>(value);
        break;
      case SweepAxis::SnrDb:
        point.snr_db = value;
        break;
      case SweepAxis::Users:
        point.users = static_cast<arma::uword>(value);
        break;
      case SweepAxis::RisSize:
        point.ris_rows = static_cast<arma::uword>(value);
        point.ris_cols = static_cast<arma::uword>(value);
        break;
      case SweepAxis::BsSize:
        point.bs_rows = static_cast<arma::uword>(value);
        point.bs_cols = static_cast<arma::uword>(value);
        break;
      case SweepAxis::CommonColumns:
        point.common_columns = static_cast<arma::uword>(value);
        break;
      case SweepAxis::PathsPerUser:
        point.paths_ris_user = static_cast<arma::uword>(value);
        break;
    }
    point.validate();

    std::vector<TrialResult> outcomes(trials);
    parallel_for(trials, [&](arma::uword t) { outcomes[t] = run_trial(point, hp, algorithms, t); });

    for (Algorithm a : algorithms) {
      arma::vec nmses(trials);
      double runtime_total = 0.0;
      double iters_total = 0.0;
      for (arma::uword t = 0; t < trials; ++t) {
        const TrialResult::Entry& entry = outcomes[t].results.at(a);
        nmses(t) = entry.nmse;
        runtime_total += entry.runtime_ms;
        iters_total += entry.iters_mean;
      }
      SweepReport::Row row;
      row.axis_value = value;
      row.algorithm = a;
      row.trials = trials;
      row.nmse_mean = arma::mean(nmses);
      row.nmse_stderr =
          trials > 1 ? arma::stddev(nmses) / std::sqrt(static_cast<double>(trials)) : 0.0;
      row.runtime_ms_mean = keep_runtime ? runtime_total / static_cast<double>(trials) : 0.0;
      row.iters_mean = iters_total / static_cast<double>(trials);
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace

SweepReport sweep(SystemConfig cfg, const SblHyperparams& hp, SweepAxis axis,
                  const std::vector<double>& values, arma::uword trials,
                  const std::vector<Algorithm>& algorithms) {
  // Sweep reports are bitwise-reproducible experiment records, so the wall
  // time column stays zero here; timing is the product of bench_complexity.
  return sweep_impl(std::move(cfg), hp, axis, values, trials, algorithms, false);
}

SweepReport bench_complexity(SystemConfig cfg, const SblHyperparams& hp,
                             const std::vector<arma::uword>& path_counts, arma::uword trials) {
  if (path_counts.empty()) throw std::invalid_argument("bench_complexity: path counts empty");
  std::vector<double> values(path_counts.begin(), path_counts.end());
  return sweep_impl(std::move(cfg), hp, SweepAxis::PathsPerUser, values, trials,
                    {Algorithm::Pci, Algorithm::Omp}, true);
}

}  // namespace risest

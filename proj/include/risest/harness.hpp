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

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "risest/estimators.hpp"

namespace risest {

enum class Algorithm {
  Pci,       // joint estimator; column mode follows the scenario
  PciFixed,  // joint estimator with the fixed common-column count
  PciAuto,   // joint estimator with auto-clustering
  UampSbl,   // plain single-vector solver per observation column
  Omp,       // greedy baseline
  OracleLs,  // true-support least squares
};

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

// Mean over users of ||estimate_j - truth_j||_F^2 / ||truth_j||_F^2 in the
// angular domain. Throws if any user's true channel has zero norm.
double nmse(const std::vector<arma::cx_mat>& estimate, const ChannelRealization& truth);

struct TrialResult {
  struct Entry {
    double nmse = 0.0;
    double runtime_ms = 0.0;
    double iters_mean = 0.0;
  };
  std::uint64_t seed = 0;
  arma::uword trial_index = 0;
  std::map<Algorithm, Entry> results;
};

// Generates one seeded realization + measurement and runs every requested
// algorithm on identical data. Timing covers estimator execution only.
TrialResult run_trial(const SystemConfig& cfg, const SblHyperparams& hp,
                      const std::vector<Algorithm>& algorithms, arma::uword trial_index);

enum class SweepAxis { Pilots, SnrDb, Users, RisSize, BsSize, CommonColumns, PathsPerUser };

std::string sweep_axis_name(SweepAxis axis);
std::optional<SweepAxis> sweep_axis_from_name(const std::string& name);

struct SweepReport {
  struct Row {
    double axis_value = 0.0;
    Algorithm algorithm = Algorithm::Pci;
    double nmse_mean = 0.0;
    double nmse_stderr = 0.0;
    arma::uword trials = 0;
    double runtime_ms_mean = 0.0;
    double iters_mean = 0.0;
  };
  SweepAxis axis = SweepAxis::SnrDb;
  std::vector<Row> rows;

  // One row per (axis value, algorithm); header mandatory, 10 significant
  // digits, '\n' line endings.
  std::string to_csv() const;
};

// Runs `trials` independent trials per axis value with the axis override
// applied to cfg. Trials execute on a worker pool; aggregation order is
// fixed so reports are byte-reproducible.
SweepReport sweep(SystemConfig cfg, const SblHyperparams& hp, SweepAxis axis,
                  const std::vector<double>& values, arma::uword trials,
                  const std::vector<Algorithm>& algorithms);

// Estimator wall time as the per-user path count grows, all else fixed.
SweepReport bench_complexity(SystemConfig cfg, const SblHyperparams& hp,
                             const std::vector<arma::uword>& path_counts, arma::uword trials);

// Worker pool width: hardware concurrency capped by RIS_EST_THREADS.
unsigned worker_count();

// Runs fn(0..count-1) across the worker pool; rethrows the first exception.
void parallel_for(arma::uword count, const std::function<void(arma::uword)>& fn);

// 10-significant-digit float formatting shared by every report writer.
std::string format_double(double value);

}  // namespace risest

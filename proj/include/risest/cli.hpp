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

#include <iosfwd>
#include <string>
#include <vector>

#include "risest/harness.hpp"

namespace risest {

// Configuration problem (bad file, bad flag, invariant violation): exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  SystemConfig system;
  SblHyperparams hyper;
  std::vector<Algorithm> algorithms = {Algorithm::Pci, Algorithm::UampSbl, Algorithm::Omp,
                                       Algorithm::OracleLs};
  SweepAxis axis = SweepAxis::SnrDb;
  std::vector<double> axis_values = {-10.0, 0.0, 10.0};
  std::vector<arma::uword> bench_paths = {4, 6, 8, 10};
  arma::uword trials = 50;
  std::string out_path;  // empty: stdout
  std::string in_path;   // estimate: load a dump instead of drawing

  void validate() const;  // throws ConfigError naming the field
};

// Flat key = value file ('#' starts a comment). Unknown keys and malformed
// values are hard errors carrying the line number. Returns `base` with the
// file's settings applied.
CliConfig parse_config_file(const std::string& path, CliConfig base = {});

// Writes every resolved setting in config-file syntax, so a run can be
// reproduced from its log alone.
void log_resolved_config(const CliConfig& cfg, const std::string& subcommand, std::ostream& os);

// Full command-line entry point. Returns the process exit code:
// 0 success, 1 configuration error, 2 runtime failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace risest

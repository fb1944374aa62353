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

#include <complex>
#include <cstdint>
#include <vector>

#include "risest/numerics.hpp"
#include "risest/rng.hpp"

namespace risest {

// Sharing scenario for the RIS-user links: in scenario One every user shares
// common_columns paths; in scenario Two only user clusters share paths.
enum class Scenario { One, Two };

struct SystemConfig {
  // BS array (M = bs_rows * bs_cols antennas)
  arma::uword bs_rows = 8;
  arma::uword bs_cols = 8;
  // RIS panel (N = ris_rows * ris_cols elements)
  arma::uword ris_rows = 16;
  arma::uword ris_cols = 16;
  arma::uword users = 16;    // J
  arma::uword pilots = 192;  // T time slots

  arma::uword paths_bs_ris = 5;    // P_BR
  arma::uword paths_ris_user = 10; // P_j, uniform across users
  arma::uword common_columns = 4;  // P_c, scenario One
  arma::uword clusters = 3;        // K, scenario Two
  double cross_cluster_prob = 0.5; // adjacent-cluster sharing probability

  double snr_db = 0.0;
  double dist_bs_ris = 10.0;    // meters
  double dist_ris_user = 100.0; // meters
  double exp_bs_ris = 2.2;      // path-loss exponents
  double exp_ris_user = 2.8;

  Scenario scenario = Scenario::One;
  std::uint64_t seed = 1;

  arma::uword bs_antennas() const { return bs_rows * bs_cols; }
  arma::uword ris_elements() const { return ris_rows * ris_cols; }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  // Reduced dimensioning used by the test and benchmark suites.
  static SystemConfig desk_scale();
};

struct BsRisPath {
  std::complex<double> gain;
  GridAngle bs_angle;                 // direction at the BS
  arma::uword ris_departure_freq;    // flattened RIS grid index in [0, N)
};

struct RisUserPath {
  std::complex<double> gain;
  arma::uword ris_arrival_freq;      // flattened RIS grid index in [0, N)
  bool common = false;               // shared across users (or a cluster)
};

struct PathEnsemble {
  std::vector<BsRisPath> bs_ris_paths;                  // length P_BR
  std::vector<std::vector<RisUserPath>> ris_user_paths; // [user][path], P_j each
  // scenario Two bookkeeping
  std::vector<arma::uword> cluster_of_user;
  std::vector<std::vector<arma::uword>> cluster_shared_freqs;
};

struct ChannelRealization {
  arma::cx_mat h_bs_ris;                  // M x N
  std::vector<arma::cx_vec> h_ris_user;   // per user, length N
  std::vector<arma::cx_mat> cascaded;     // per user, M x N
  std::vector<arma::cx_mat> angular;      // per user, M x N
  std::vector<arma::uword> true_row_support; // P_BR rows, ascending
  // [user][row rank][...]: column indices, ascending, aligned with true_row_support
  std::vector<std::vector<std::vector<arma::uword>>> true_column_supports;
};

PathEnsemble sample_paths_scenario1(const SystemConfig& cfg, Rng& rng);
PathEnsemble sample_paths_scenario2(const SystemConfig& cfg, Rng& rng);

// Dispatches on cfg.scenario.
PathEnsemble sample_paths(const SystemConfig& cfg, Rng& rng);

// Builds the spatial channels, cascades them per user and transforms to the
// angular domain, recording the exact nonzero supports.
ChannelRealization assemble_channels(const PathEnsemble& paths, const SystemConfig& cfg,
                                     const UnitaryDictionary& bs_dict,
                                     const UnitaryDictionary& ris_dict);

// Angular-domain column produced by a (departure, arrival) frequency pair:
// component-wise modular addition on the RIS grid.
arma::uword combine_ris_freqs(arma::uword departure, arma::uword arrival,
                              arma::uword ris_rows, arma::uword ris_cols);

}  // namespace risest

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

#include "risest/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace risest {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

// Per-path gain: fixed magnitude sqrt(1e-3 * d^-exp) with uniform phase.
// Equal-power paths keep the per-user precisions comparable, which the
// joint estimator's precision pooling relies on.
std::complex<double> draw_gain(Rng& rng, double scale) {
  return scale * rng.unit_phase();
}

double gain_scale(double distance, double exponent) {
  return std::sqrt(1e-3 * std::pow(distance, -exponent));
}

std::vector<arma::uword> to_uword(const std::vector<std::uint64_t>& v) {
  return std::vector<arma::uword>(v.begin(), v.end());
}

// Pool of [0, n) minus the taken set, preserving ascending order.
std::vector<std::uint64_t> complement_pool(arma::uword n, const std::vector<arma::uword>& taken) {
  std::vector<char> used(n, 0);
  for (arma::uword t : taken) used[t] = 1;
  std::vector<std::uint64_t> pool;
  pool.reserve(n - taken.size());
  for (arma::uword i = 0; i < n; ++i) {
    if (!used[i]) pool.push_back(i);
  }
  return pool;
}

void draw_bs_ris_paths(PathEnsemble& out, const SystemConfig& cfg, Rng& rng) {
  const arma::uword m = cfg.bs_antennas();
  const arma::uword n = cfg.ris_elements();
  const double scale = gain_scale(cfg.dist_bs_ris, cfg.exp_bs_ris);
  const auto bs_indices = rng.distinct(m, cfg.paths_bs_ris);
  out.bs_ris_paths.reserve(cfg.paths_bs_ris);
  for (arma::uword rho = 0; rho < cfg.paths_bs_ris; ++rho) {
    BsRisPath path;
    path.gain = draw_gain(rng, scale);
    path.bs_angle = GridAngle{static_cast<arma::uword>(bs_indices[rho]) / cfg.bs_cols,
                              static_cast<arma::uword>(bs_indices[rho]) % cfg.bs_cols};
    path.ris_departure_freq = rng.uniform_int(n);
    out.bs_ris_paths.push_back(path);
  }
}

// Fills one user's arrival paths: `shared` first (flagged common), then
// unique draws from the rest of the grid.
void fill_user_paths(std::vector<RisUserPath>& user, const std::vector<arma::uword>& shared,
                     const SystemConfig& cfg, Rng& rng) {
  const double scale = gain_scale(cfg.dist_ris_user, cfg.exp_ris_user);
  user.clear();
  user.reserve(cfg.paths_ris_user);
  for (arma::uword f : shared) {
    user.push_back(RisUserPath{draw_gain(rng, scale), f, true});
  }
  const std::size_t unique_count = cfg.paths_ris_user - shared.size();
  auto pool = complement_pool(cfg.ris_elements(), shared);
  for (std::uint64_t f : rng.take(std::move(pool), unique_count)) {
    user.push_back(RisUserPath{draw_gain(rng, scale), static_cast<arma::uword>(f), false});
  }
}

}  // namespace

void SystemConfig::validate() const {
  require(bs_rows >= 1, "bs_rows must be at least 1");
  require(bs_cols >= 1, "bs_cols must be at least 1");
  require(ris_rows >= 1, "ris_rows must be at least 1");
  require(ris_cols >= 1, "ris_cols must be at least 1");
  require(users >= 1, "users must be at least 1");
  require(pilots >= 1, "pilots must be at least 1");
  require(paths_bs_ris >= 1, "paths_bs_ris must be at least 1");
  require(paths_ris_user >= 1, "paths_ris_user must be at least 1");
  require(paths_bs_ris <= bs_antennas(), "paths_bs_ris must not exceed the BS antenna count");
  require(paths_ris_user <= ris_elements(), "paths_ris_user must not exceed the RIS element count");
  require(common_columns <= paths_ris_user, "common_columns must not exceed paths_ris_user");
  require(dist_bs_ris > 0.0, "dist_bs_ris must be positive");
  require(dist_ris_user > 0.0, "dist_ris_user must be positive");
  require(cross_cluster_prob >= 0.0 && cross_cluster_prob <= 1.0,
          "cross_cluster_prob must lie in [0, 1]");
  require(std::isfinite(exp_bs_ris) && std::isfinite(exp_ris_user),
          "exp_bs_ris and exp_ris_user must be finite");
  if (scenario == Scenario::Two) {
    require(clusters >= 1, "clusters must be at least 1");
    require(clusters <= users, "clusters must not exceed users");
  }
}

SystemConfig SystemConfig::desk_scale() {
  SystemConfig cfg;
  cfg.bs_rows = 4;
  cfg.bs_cols = 4;
  cfg.ris_rows = 8;
  cfg.ris_cols = 8;
  cfg.users = 8;
  cfg.pilots = 96;
  return cfg;
}

arma::uword combine_ris_freqs(arma::uword departure, arma::uword arrival,
                              arma::uword ris_rows, arma::uword ris_cols) {
  const arma::uword row = (departure / ris_cols + arrival / ris_cols) % ris_rows;
  const arma::uword col = (departure % ris_cols + arrival % ris_cols) % ris_cols;
  return row * ris_cols + col;
}

PathEnsemble sample_paths_scenario1(const SystemConfig& cfg, Rng& rng) {
  cfg.validate();
  require(cfg.scenario == Scenario::One, "sample_paths_scenario1 requires scenario One");

  PathEnsemble out;
  draw_bs_ris_paths(out, cfg, rng);

  // One shared arrival set for everybody, unique fill per user.
  const auto shared = to_uword(rng.distinct(cfg.ris_elements(), cfg.common_columns));
  out.ris_user_paths.resize(cfg.users);
  for (arma::uword j = 0; j < cfg.users; ++j) {
    fill_user_paths(out.ris_user_paths[j], shared, cfg, rng);
  }
  return out;
}

PathEnsemble sample_paths_scenario2(const SystemConfig& cfg, Rng& rng) {
  cfg.validate();
  require(cfg.scenario == Scenario::Two, "sample_paths_scenario2 requires scenario Two");

  PathEnsemble out;
  draw_bs_ris_paths(out, cfg, rng);

  // Uniform user-to-cluster assignment, redrawn until no cluster is empty.
  const arma::uword k = cfg.clusters;
  std::vector<arma::uword> assignment(cfg.users);
  for (int attempt = 0;; ++attempt) {
    std::vector<arma::uword> count(k, 0);
    for (arma::uword j = 0; j < cfg.users; ++j) {
      assignment[j] = static_cast<arma::uword>(rng.uniform_int(k));
      ++count[assignment[j]];
    }
    if (std::all_of(count.begin(), count.end(), [](arma::uword c) { return c > 0; })) break;
    if (attempt >= 100000) {
      throw std::runtime_error("sample_paths_scenario2: could not fill every cluster");
    }
  }
  out.cluster_of_user = assignment;

  // Shared arrival sets: each cluster shares v ~ U[1, P_j] frequencies; with
  // probability cross_cluster_prob a cluster inherits part of its left
  // neighbour's set, modelling users near a cluster boundary. Inheritance
  // reaches one hop only and fresh draws avoid every other cluster's set, so
  // no frequency is shared by all clusters once there are three or more.
  std::vector<arma::uword> shared_count(k);
  for (arma::uword c = 0; c < k; ++c) {
    shared_count[c] = 1 + static_cast<arma::uword>(rng.uniform_int(cfg.paths_ris_user));
  }
  out.cluster_shared_freqs.resize(k);
  std::vector<std::vector<arma::uword>> own_freqs(k);
  std::vector<arma::uword> taken;
  for (arma::uword c = 0; c < k; ++c) {
    std::vector<arma::uword> inherited;
    if (c > 0 && !own_freqs[c - 1].empty() && rng.bernoulli(cfg.cross_cluster_prob)) {
      const arma::uword cap =
          std::min<arma::uword>(own_freqs[c - 1].size(), shared_count[c]);
      const arma::uword overlap = 1 + static_cast<arma::uword>(rng.uniform_int(cap));
      std::vector<std::uint64_t> prev(own_freqs[c - 1].begin(), own_freqs[c - 1].end());
      inherited = to_uword(rng.take(std::move(prev), overlap));
    }
    auto fresh_pool = complement_pool(cfg.ris_elements(), taken);
    auto fresh = to_uword(rng.take(std::move(fresh_pool), shared_count[c] - inherited.size()));
    own_freqs[c] = fresh;
    taken.insert(taken.end(), fresh.begin(), fresh.end());
    auto& set = out.cluster_shared_freqs[c];
    set = inherited;
    set.insert(set.end(), fresh.begin(), fresh.end());
  }

  out.ris_user_paths.resize(cfg.users);
  for (arma::uword j = 0; j < cfg.users; ++j) {
    fill_user_paths(out.ris_user_paths[j], out.cluster_shared_freqs[assignment[j]], cfg, rng);
  }
  return out;
}

PathEnsemble sample_paths(const SystemConfig& cfg, Rng& rng) {
  return cfg.scenario == Scenario::One ? sample_paths_scenario1(cfg, rng)
                                       : sample_paths_scenario2(cfg, rng);
}

ChannelRealization assemble_channels(const PathEnsemble& paths, const SystemConfig& cfg,
                                     const UnitaryDictionary& bs_dict,
                                     const UnitaryDictionary& ris_dict) {
  const arma::uword m = cfg.bs_antennas();
  const arma::uword n = cfg.ris_elements();
  if (bs_dict.size() != m || ris_dict.size() != n) {
    throw std::invalid_argument("assemble_channels: dictionary sizes do not match the config");
  }
  if (paths.bs_ris_paths.size() != cfg.paths_bs_ris ||
      paths.ris_user_paths.size() != cfg.users) {
    throw std::invalid_argument("assemble_channels: ensemble does not match the config");
  }

  ChannelRealization out;

  // BS-RIS channel. The RIS-side factor uses the conjugated dictionary column
  // so that a (departure, arrival) pair lands on angular column
  // combine_ris_freqs(departure, arrival); the conjugation relabels angles
  // that are drawn uniformly on the grid anyway.
  out.h_bs_ris.zeros(m, n);
  const double bs_ris_norm =
      std::sqrt(static_cast<double>(m) * static_cast<double>(n) /
                static_cast<double>(cfg.paths_bs_ris));
  for (const BsRisPath& path : paths.bs_ris_paths) {
    const arma::cx_vec b = steering_vector(path.bs_angle, cfg.bs_rows, cfg.bs_cols);
    const arma::cx_vec r = arma::conj(
        steering_vector(ris_dict.angle_of(path.ris_departure_freq), cfg.ris_rows, cfg.ris_cols));
    out.h_bs_ris += (bs_ris_norm * path.gain) * (b * r.st());
  }

  // RIS-user channels.
  const double ris_user_norm =
      std::sqrt(static_cast<double>(n) / static_cast<double>(cfg.paths_ris_user));
  out.h_ris_user.resize(cfg.users);
  for (arma::uword j = 0; j < cfg.users; ++j) {
    if (paths.ris_user_paths[j].size() != cfg.paths_ris_user) {
      throw std::invalid_argument("assemble_channels: user path count does not match the config");
    }
    arma::cx_vec h(n, arma::fill::zeros);
    for (const RisUserPath& path : paths.ris_user_paths[j]) {
      h += (ris_user_norm * path.gain) *
           arma::conj(steering_vector(ris_dict.angle_of(path.ris_arrival_freq),
                                      cfg.ris_rows, cfg.ris_cols));
    }
    out.h_ris_user[j] = h;
  }

  // Cascade and transform to the angular domain.
  out.cascaded.resize(cfg.users);
  out.angular.resize(cfg.users);
  for (arma::uword j = 0; j < cfg.users; ++j) {
    out.cascaded[j] = out.h_bs_ris * arma::diagmat(out.h_ris_user[j]);
    out.angular[j] = bs_dict.matrix.t() * out.cascaded[j] * ris_dict.matrix;
  }

  // Supports are known exactly from the drawn grid indices.
  std::vector<arma::uword> rows;
  rows.reserve(cfg.paths_bs_ris);
  for (const BsRisPath& path : paths.bs_ris_paths) {
    rows.push_back(bs_dict.column_of(path.bs_angle));
  }
  std::sort(rows.begin(), rows.end());
  out.true_row_support = rows;

  out.true_column_supports.resize(cfg.users);
  for (arma::uword j = 0; j < cfg.users; ++j) {
    out.true_column_supports[j].resize(cfg.paths_bs_ris);
    for (arma::uword rank = 0; rank < cfg.paths_bs_ris; ++rank) {
      // locate the path whose BS angle owns this support row
      const auto it = std::find_if(
          paths.bs_ris_paths.begin(), paths.bs_ris_paths.end(),
          [&](const BsRisPath& p) { return bs_dict.column_of(p.bs_angle) == rows[rank]; });
      std::vector<arma::uword> cols;
      cols.reserve(cfg.paths_ris_user);
      for (const RisUserPath& path : paths.ris_user_paths[j]) {
        cols.push_back(combine_ris_freqs(it->ris_departure_freq, path.ris_arrival_freq,
                                         cfg.ris_rows, cfg.ris_cols));
      }
      std::sort(cols.begin(), cols.end());
      out.true_column_supports[j][rank] = std::move(cols);
    }
  }
  return out;
}

}  // namespace risest

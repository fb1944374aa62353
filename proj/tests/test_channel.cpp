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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "risest/channel.hpp"
#include "risest/serialize.hpp"

using namespace risest;

namespace {

std::set<arma::uword> arrival_set(const PathEnsemble& paths, arma::uword user) {
  std::set<arma::uword> freqs;
  for (const RisUserPath& p : paths.ris_user_paths[user]) freqs.insert(p.ris_arrival_freq);
  return freqs;
}

std::set<arma::uword> intersect_all_arrivals(const PathEnsemble& paths) {
  std::set<arma::uword> common = arrival_set(paths, 0);
  for (arma::uword j = 1; j < paths.ris_user_paths.size(); ++j) {
    const auto next = arrival_set(paths, j);
    std::set<arma::uword> kept;
    std::set_intersection(common.begin(), common.end(), next.begin(), next.end(),
                          std::inserter(kept, kept.begin()));
    common = kept;
  }
  return common;
}

ChannelRealization realize(const SystemConfig& cfg, std::uint64_t stream = 0) {
  Rng rng(cfg.seed, stream);
  const auto paths = sample_paths(cfg, rng);
  return assemble_channels(paths, cfg, dft_dictionary(cfg.bs_rows, cfg.bs_cols),
                           dft_dictionary(cfg.ris_rows, cfg.ris_cols));
}

arma::uword count_above(const arma::cx_mat& m, double threshold) {
  arma::uword count = 0;
  for (arma::uword k = 0; k < m.n_elem; ++k) {
    if (std::abs(m(k)) > threshold) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("config validation names the offending field") {
  SystemConfig cfg = SystemConfig::desk_scale();
  cfg.common_columns = cfg.paths_ris_user + 1;
  CHECK_THROWS_WITH_AS(cfg.validate(), "common_columns must not exceed paths_ris_user",
                       std::invalid_argument);
  cfg = SystemConfig::desk_scale();
  cfg.pilots = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), "pilots must be at least 1", std::invalid_argument);
  cfg = SystemConfig::desk_scale();
  cfg.scenario = Scenario::Two;
  cfg.clusters = cfg.users + 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("scenario 1 full sharing when common count equals path count") {
  SystemConfig cfg = SystemConfig::desk_scale();
  cfg.common_columns = cfg.paths_ris_user;
  Rng rng(3);
  const auto paths = sample_paths_scenario1(cfg, rng);
  const auto first = arrival_set(paths, 0);
  CHECK(first.size() == cfg.paths_ris_user);
  for (arma::uword j = 1; j < cfg.users; ++j) {
    CHECK(arrival_set(paths, j) == first);
  }
}

TEST_CASE("scenario 1 no forced sharing when common count is zero") {
  SystemConfig cfg = SystemConfig::desk_scale();
  cfg.common_columns = 0;
  Rng rng(4);
  const auto paths = sample_paths_scenario1(cfg, rng);
  for (arma::uword j = 0; j < cfg.users; ++j) {
    CHECK(arrival_set(paths, j).size() == cfg.paths_ris_user);  // distinct within user
    for (const RisUserPath& p : paths.ris_user_paths[j]) CHECK_FALSE(p.common);
  }
}

TEST_CASE("scenario 1 shares exactly the configured number of frequencies") {
  for (arma::uword pc : {arma::uword{2}, arma::uword{6}}) {
    SystemConfig cfg = SystemConfig::desk_scale();
    cfg.common_columns = pc;
    for (std::uint64_t stream = 0; stream < 20; ++stream) {
      Rng rng(cfg.seed, stream);
      const auto paths = sample_paths_scenario1(cfg, rng);
      CHECK(intersect_all_arrivals(paths).size() == pc);
    }
  }
}

TEST_CASE("scenario 2 with one cluster behaves like scenario 1") {
  SystemConfig cfg = SystemConfig::desk_scale();
  cfg.scenario = Scenario::Two;
  cfg.clusters = 1;
  Rng rng(5);
  const auto paths = sample_paths_scenario2(cfg, rng);
  const auto shared = intersect_all_arrivals(paths);
  CHECK(shared.size() >= paths.cluster_shared_freqs[0].size());
  for (arma::uword f : paths.cluster_shared_freqs[0]) CHECK(shared.count(f) == 1);
}

TEST_CASE("scenario 2 with singleton clusters") {
  SystemConfig cfg = SystemConfig::desk_scale();
  cfg.scenario = Scenario::Two;
  cfg.clusters = cfg.users;
  Rng rng(6);
  const auto paths = sample_paths_scenario2(cfg, rng);
  std::set<arma::uword> seen(paths.cluster_of_user.begin(), paths.cluster_of_user.end());
  CHECK(seen.size() == cfg.users);  // every cluster occupied exactly once
  for (arma::uword j = 0; j < cfg.users; ++j) {
    CHECK(arrival_set(paths, j).size() == cfg.paths_ris_user);
  }
}

TEST_CASE("scenario 2 default clustering keeps per-user counts and no global sharing") {
  SystemConfig cfg;
  cfg.scenario = Scenario::Two;
  cfg.clusters = 3;
  for (std::uint64_t stream = 0; stream < 10; ++stream) {
    Rng rng(cfg.seed, stream);
    const auto paths = sample_paths_scenario2(cfg, rng);
    for (arma::uword j = 0; j < cfg.users; ++j) {
      CHECK(arrival_set(paths, j).size() == cfg.paths_ris_user);
    }
    CHECK(intersect_all_arrivals(paths).empty());
  }
}

TEST_CASE("single-path channel lands on the predicted angular entry") {
  SystemConfig cfg = SystemConfig::desk_scale();
  cfg.paths_bs_ris = 1;
  cfg.paths_ris_user = 1;
  cfg.users = 1;
  cfg.common_columns = 0;

  PathEnsemble paths;
  paths.bs_ris_paths.push_back(BsRisPath{{1.0, 0.0}, GridAngle{2, 3}, 13});
  paths.ris_user_paths.push_back({RisUserPath{{1.0, 0.0}, 57, false}});

  const auto real = assemble_channels(paths, cfg, dft_dictionary(4, 4), dft_dictionary(8, 8));
  const arma::uword row = 2 * 4 + 3;
  const arma::uword col = combine_ris_freqs(13, 57, 8, 8);
  const double expected = std::sqrt(16.0 * 64.0);  // sqrt(M*N) for unit gains
  CHECK(count_above(real.angular[0], 1e-9) == 1);
  CHECK(std::abs(std::abs(real.angular[0](row, col)) - expected) < 1e-9);
  CHECK(real.true_row_support == std::vector<arma::uword>{row});
  CHECK(real.true_column_supports[0][0] == std::vector<arma::uword>{col});
}

TEST_CASE("zero gains produce identically zero channels") {
  SystemConfig cfg = SystemConfig::desk_scale();
  cfg.paths_bs_ris = 2;
  cfg.paths_ris_user = 2;
  cfg.users = 2;
  cfg.common_columns = 0;

  PathEnsemble paths;
  paths.bs_ris_paths.push_back(BsRisPath{{0.0, 0.0}, GridAngle{0, 0}, 1});
  paths.bs_ris_paths.push_back(BsRisPath{{0.0, 0.0}, GridAngle{1, 1}, 2});
  paths.ris_user_paths.assign(
      2, {RisUserPath{{0.0, 0.0}, 3, false}, RisUserPath{{0.0, 0.0}, 4, false}});

  const auto real = assemble_channels(paths, cfg, dft_dictionary(4, 4), dft_dictionary(8, 8));
  CHECK(arma::norm(real.h_bs_ris, "fro") == 0.0);
  for (arma::uword j = 0; j < 2; ++j) {
    CHECK(arma::norm(real.cascaded[j], "fro") == 0.0);
    CHECK(arma::norm(real.angular[j], "fro") == 0.0);
  }
}

TEST_CASE("realizations carry the exact dual sparsity structure") {
  const SystemConfig cfg = SystemConfig::desk_scale();
  const auto bs_dict = dft_dictionary(cfg.bs_rows, cfg.bs_cols);
  const auto ris_dict = dft_dictionary(cfg.ris_rows, cfg.ris_cols);

  for (std::uint64_t stream = 0; stream < 10; ++stream) {
    Rng rng(cfg.seed, stream);
    const auto paths = sample_paths(cfg, rng);
    const auto real = assemble_channels(paths, cfg, bs_dict, ris_dict);

    CHECK(real.true_row_support.size() == cfg.paths_bs_ris);
    for (arma::uword j = 0; j < cfg.users; ++j) {
      // cascade identity and unitary transform identity
      CHECK(arma::norm(real.cascaded[j] -
                           real.h_bs_ris * arma::diagmat(real.h_ris_user[j]), "fro") < 1e-10);
      CHECK(arma::norm(real.angular[j] -
                           bs_dict.matrix.t() * real.cascaded[j] * ris_dict.matrix, "fro") < 1e-10);
      // unitary round trip back to the spatial domain
      CHECK(arma::norm(bs_dict.matrix * real.angular[j] * ris_dict.matrix.t() -
                           real.cascaded[j], "fro") < 1e-10);

      CHECK(count_above(real.angular[j], 1e-9) == cfg.paths_bs_ris * cfg.paths_ris_user);
      for (std::size_t rank = 0; rank < real.true_row_support.size(); ++rank) {
        const arma::uword row = real.true_row_support[rank];
        for (arma::uword col : real.true_column_supports[j][rank]) {
          CHECK(std::abs(real.angular[j](row, col)) > 1e-9);
        }
        // nothing outside the recorded support
        arma::uword in_row = 0;
        for (arma::uword c = 0; c < real.angular[j].n_cols; ++c) {
          if (std::abs(real.angular[j](row, c)) > 1e-9) ++in_row;
        }
        CHECK(in_row == cfg.paths_ris_user);
      }
    }

    // per-row common columns: at least the configured overlap survives
    for (std::size_t rank = 0; rank < real.true_row_support.size(); ++rank) {
      std::set<arma::uword> common(real.true_column_supports[0][rank].begin(),
                                   real.true_column_supports[0][rank].end());
      for (arma::uword j = 1; j < cfg.users; ++j) {
        std::set<arma::uword> next(real.true_column_supports[j][rank].begin(),
                                   real.true_column_supports[j][rank].end());
        std::set<arma::uword> kept;
        std::set_intersection(common.begin(), common.end(), next.begin(), next.end(),
                              std::inserter(kept, kept.begin()));
        common = kept;
      }
      CHECK(common.size() >= cfg.common_columns);
    }
  }
}

TEST_CASE("diag commutation identity used by the observation path") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    arma::cx_vec a(16), b(16);
    for (arma::uword k = 0; k < 16; ++k) {
      a(k) = rng.cgaussian();
      b(k) = rng.cgaussian();
    }
    CHECK(arma::norm(arma::diagmat(a) * b - arma::diagmat(b) * a) < 1e-12);
  }
}

TEST_CASE("path sampling is deterministic in the seed") {
  SystemConfig cfg = SystemConfig::desk_scale();
  for (Scenario sc : {Scenario::One, Scenario::Two}) {
    cfg.scenario = sc;
    Rng a(42, 7), b(42, 7);
    const auto pa = sample_paths(cfg, a);
    const auto pb = sample_paths(cfg, b);
    REQUIRE(pa.bs_ris_paths.size() == pb.bs_ris_paths.size());
    for (std::size_t k = 0; k < pa.bs_ris_paths.size(); ++k) {
      CHECK(pa.bs_ris_paths[k].gain == pb.bs_ris_paths[k].gain);
      CHECK(pa.bs_ris_paths[k].ris_departure_freq == pb.bs_ris_paths[k].ris_departure_freq);
      CHECK(pa.bs_ris_paths[k].bs_angle.row_index == pb.bs_ris_paths[k].bs_angle.row_index);
      CHECK(pa.bs_ris_paths[k].bs_angle.col_index == pb.bs_ris_paths[k].bs_angle.col_index);
    }
    for (arma::uword j = 0; j < cfg.users; ++j) {
      REQUIRE(pa.ris_user_paths[j].size() == pb.ris_user_paths[j].size());
      for (std::size_t k = 0; k < pa.ris_user_paths[j].size(); ++k) {
        CHECK(pa.ris_user_paths[j][k].gain == pb.ris_user_paths[j][k].gain);
        CHECK(pa.ris_user_paths[j][k].ris_arrival_freq == pb.ris_user_paths[j][k].ris_arrival_freq);
      }
    }
  }
}

TEST_CASE("dump round trip preserves the realization") {
  const SystemConfig cfg = SystemConfig::desk_scale();
  TrialDump dump;
  dump.config = cfg;
  dump.realization = realize(cfg);
  Rng rng(cfg.seed, 1);
  const auto schedule = make_ris_schedule(cfg.ris_elements(), cfg.pilots, rng);
  const auto raw = observe(dump.realization, schedule, 0.01, rng);
  dump.measurements = to_cs_model(raw, schedule, dft_dictionary(cfg.bs_rows, cfg.bs_cols),
                                  dft_dictionary(cfg.ris_rows, cfg.ris_cols));

  const std::string path = "roundtrip_test.bin";
  save_dump(path, dump);
  const TrialDump loaded = load_dump(path);
  std::remove(path.c_str());

  CHECK(loaded.config.seed == cfg.seed);
  CHECK(loaded.config.users == cfg.users);
  CHECK(arma::norm(loaded.realization.h_bs_ris - dump.realization.h_bs_ris, "fro") == 0.0);
  CHECK(loaded.realization.true_row_support == dump.realization.true_row_support);
  for (arma::uword j = 0; j < cfg.users; ++j) {
    CHECK(arma::norm(loaded.realization.angular[j] - dump.realization.angular[j], "fro") == 0.0);
    CHECK(loaded.realization.true_column_supports[j] == dump.realization.true_column_supports[j]);
    CHECK(arma::norm(loaded.measurements.observations[j] - dump.measurements.observations[j],
                     "fro") == 0.0);
  }
  CHECK(loaded.measurements.noise_variance == dump.measurements.noise_variance);
}

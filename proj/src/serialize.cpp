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

#include "risest/serialize.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace risest {

namespace {

constexpr char kMagic[8] = {'R', 'I', 'S', 'D', 'M', 'P', '0', '1'};

void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw std::runtime_error("dump: truncated file");
  return v;
}

double read_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw std::runtime_error("dump: truncated file");
  return v;
}

// Row-major scan, interleaved real/imag doubles.
void write_cx_mat(std::ostream& os, const arma::cx_mat& m) {
  write_u64(os, m.n_rows);
  write_u64(os, m.n_cols);
  for (arma::uword r = 0; r < m.n_rows; ++r) {
    for (arma::uword c = 0; c < m.n_cols; ++c) {
      write_f64(os, m(r, c).real());
      write_f64(os, m(r, c).imag());
    }
  }
}

arma::cx_mat read_cx_mat(std::istream& is) {
  const arma::uword rows = read_u64(is);
  const arma::uword cols = read_u64(is);
  arma::cx_mat m(rows, cols);
  for (arma::uword r = 0; r < rows; ++r) {
    for (arma::uword c = 0; c < cols; ++c) {
      const double re = read_f64(is);
      const double im = read_f64(is);
      m(r, c) = {re, im};
    }
  }
  return m;
}

void write_indices(std::ostream& os, const std::vector<arma::uword>& v) {
  write_u64(os, v.size());
  for (arma::uword x : v) write_u64(os, x);
}

std::vector<arma::uword> read_indices(std::istream& is) {
  const std::uint64_t count = read_u64(is);
  std::vector<arma::uword> v(count);
  for (auto& x : v) x = read_u64(is);
  return v;
}

void write_config(std::ostream& os, const SystemConfig& cfg) {
  write_u64(os, cfg.bs_rows);
  write_u64(os, cfg.bs_cols);
  write_u64(os, cfg.ris_rows);
  write_u64(os, cfg.ris_cols);
  write_u64(os, cfg.users);
  write_u64(os, cfg.pilots);
  write_u64(os, cfg.paths_bs_ris);
  write_u64(os, cfg.paths_ris_user);
  write_u64(os, cfg.common_columns);
  write_u64(os, cfg.clusters);
  write_f64(os, cfg.cross_cluster_prob);
  write_f64(os, cfg.snr_db);
  write_f64(os, cfg.dist_bs_ris);
  write_f64(os, cfg.dist_ris_user);
  write_f64(os, cfg.exp_bs_ris);
  write_f64(os, cfg.exp_ris_user);
  write_u64(os, cfg.scenario == Scenario::One ? 1 : 2);
  write_u64(os, cfg.seed);
}

SystemConfig read_config(std::istream& is) {
  SystemConfig cfg;
  cfg.bs_rows = read_u64(is);
  cfg.bs_cols = read_u64(is);
  cfg.ris_rows = read_u64(is);
  cfg.ris_cols = read_u64(is);
  cfg.users = read_u64(is);
  cfg.pilots = read_u64(is);
  cfg.paths_bs_ris = read_u64(is);
  cfg.paths_ris_user = read_u64(is);
  cfg.common_columns = read_u64(is);
  cfg.clusters = read_u64(is);
  cfg.cross_cluster_prob = read_f64(is);
  cfg.snr_db = read_f64(is);
  cfg.dist_bs_ris = read_f64(is);
  cfg.dist_ris_user = read_f64(is);
  cfg.exp_bs_ris = read_f64(is);
  cfg.exp_ris_user = read_f64(is);
  cfg.scenario = read_u64(is) == 1 ? Scenario::One : Scenario::Two;
  cfg.seed = read_u64(is);
  return cfg;
}

}  // namespace

void save_dump(const std::string& path, const TrialDump& dump) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("dump: cannot open " + path + " for writing");
  os.write(kMagic, sizeof(kMagic));
  write_config(os, dump.config);

  const std::uint64_t users = dump.realization.h_ris_user.size();
  write_u64(os, users);
  write_cx_mat(os, dump.realization.h_bs_ris);
  for (std::uint64_t j = 0; j < users; ++j) {
    write_cx_mat(os, arma::cx_mat(dump.realization.h_ris_user[j]));
    write_cx_mat(os, dump.realization.cascaded[j]);
    write_cx_mat(os, dump.realization.angular[j]);
  }
  write_indices(os, dump.realization.true_row_support);
  for (std::uint64_t j = 0; j < users; ++j) {
    write_u64(os, dump.realization.true_column_supports[j].size());
    for (const auto& cols : dump.realization.true_column_supports[j]) {
      write_indices(os, cols);
    }
  }

  write_u64(os, dump.measurements.observations.size());
  for (const arma::cx_mat& y : dump.measurements.observations) write_cx_mat(os, y);
  write_cx_mat(os, dump.measurements.sensing);
  write_f64(os, dump.measurements.noise_variance);
  if (!os) throw std::runtime_error("dump: write failed for " + path);
}

TrialDump load_dump(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("dump: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || !std::equal(magic, magic + 8, kMagic)) {
    throw std::runtime_error("dump: " + path + " is not a risest dump");
  }

  TrialDump dump;
  dump.config = read_config(is);
  const std::uint64_t users = read_u64(is);
  dump.realization.h_bs_ris = read_cx_mat(is);
  dump.realization.h_ris_user.resize(users);
  dump.realization.cascaded.resize(users);
  dump.realization.angular.resize(users);
  for (std::uint64_t j = 0; j < users; ++j) {
    dump.realization.h_ris_user[j] = arma::cx_vec(read_cx_mat(is));
    dump.realization.cascaded[j] = read_cx_mat(is);
    dump.realization.angular[j] = read_cx_mat(is);
  }
  dump.realization.true_row_support = read_indices(is);
  dump.realization.true_column_supports.resize(users);
  for (std::uint64_t j = 0; j < users; ++j) {
    const std::uint64_t ranks = read_u64(is);
    dump.realization.true_column_supports[j].resize(ranks);
    for (std::uint64_t r = 0; r < ranks; ++r) {
      dump.realization.true_column_supports[j][r] = read_indices(is);
    }
  }

  const std::uint64_t obs = read_u64(is);
  dump.measurements.observations.resize(obs);
  for (std::uint64_t j = 0; j < obs; ++j) dump.measurements.observations[j] = read_cx_mat(is);
  dump.measurements.sensing = read_cx_mat(is);
  dump.measurements.noise_variance = read_f64(is);
  return dump;
}

}  // namespace risest

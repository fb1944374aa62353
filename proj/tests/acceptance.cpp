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
//
// End-to-end verification suite. Each criterion prints one pass/fail line;
// the exit code is the number of failed criteria. Run with no arguments for
// all criteria, or pass criterion numbers to run a subset.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "risest/cli.hpp"
#include "risest/harness.hpp"

using namespace risest;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct ScopedEnv {
  std::string name;
  std::string previous;
  bool had = false;
  ScopedEnv(const std::string& n, const std::string& value) : name(n) {
    if (const char* old = std::getenv(name.c_str())) {
      previous = old;
      had = true;
    }
    setenv(name.c_str(), value.c_str(), 1);
  }
  ~ScopedEnv() {
    if (had) {
      setenv(name.c_str(), previous.c_str(), 1);
    } else {
      unsetenv(name.c_str());
    }
  }
};

struct Pipeline {
  ChannelRealization realization;
  MeasurementSet ms;
};

Pipeline make_pipeline(const SystemConfig& cfg, arma::uword trial) {
  Rng trial_rng(cfg.seed, trial);
  Rng paths_rng = trial_rng.fork(0);
  Rng schedule_rng = trial_rng.fork(1);
  Rng noise_rng = trial_rng.fork(2);
  const auto bs_dict = dft_dictionary(cfg.bs_rows, cfg.bs_cols);
  const auto ris_dict = dft_dictionary(cfg.ris_rows, cfg.ris_cols);
  Pipeline out;
  const auto paths = sample_paths(cfg, paths_rng);
  out.realization = assemble_channels(paths, cfg, bs_dict, ris_dict);
  const auto schedule = make_ris_schedule(cfg.ris_elements(), cfg.pilots, schedule_rng);
  const double sigma2 = calibrate_noise(cfg.snr_db, out.realization, schedule);
  const auto raw = observe(out.realization, schedule, sigma2, noise_rng);
  out.ms = to_cs_model(raw, schedule, bs_dict, ris_dict);
  return out;
}

SystemConfig desk() {
  SystemConfig cfg = SystemConfig::desk_scale();
  cfg.seed = 20260810;
  return cfg;
}

double to_db(double x) { return 10.0 * std::log10(x); }

// --- criterion 1: one-hot dictionary response for every grid angle ---------
Outcome criterion_dictionary_one_hot() {
  arma::uword violations = 0;
  for (const auto& [lr, lc] : {std::pair<arma::uword, arma::uword>{4, 4}, {8, 8}}) {
    const auto dict = dft_dictionary(lr, lc);
    for (arma::uword g = 0; g < dict.size(); ++g) {
      const arma::cx_vec response = dict.matrix.t() * steering_vector(dict.angle_of(g), lr, lc);
      arma::uword hot = 0;
      for (arma::uword k = 0; k < response.n_elem; ++k) {
        const double mag = std::abs(response(k));
        if (mag >= 1.0 - 1e-9) {
          ++hot;
          if (mag > 1.0 + 1e-9 || k != g) ++violations;
        } else if (mag >= 1e-9) {
          ++violations;
        }
      }
      if (hot != 1) ++violations;
    }
  }
  std::ostringstream detail;
  detail << "violations=" << violations << " over 16+64 grid angles";
  return {violations == 0, detail.str()};
}

// --- criterion 2: exact angular sparsity structure --------------------------
Outcome criterion_sparsity_structure() {
  const SystemConfig cfg = desk();
  const auto bs_dict = dft_dictionary(cfg.bs_rows, cfg.bs_cols);
  const auto ris_dict = dft_dictionary(cfg.ris_rows, cfg.ris_cols);
  const arma::uword expected = cfg.paths_bs_ris * cfg.paths_ris_user;
  arma::uword bad = 0;
  for (arma::uword trial = 0; trial < 200; ++trial) {
    Rng rng(cfg.seed, trial);
    const auto paths = sample_paths(cfg, rng);
    const auto real = assemble_channels(paths, cfg, bs_dict, ris_dict);
    std::set<arma::uword> reference_rows;
    bool trial_ok = true;
    for (arma::uword j = 0; j < cfg.users; ++j) {
      std::set<arma::uword> rows;
      arma::uword nonzeros = 0;
      for (arma::uword r = 0; r < real.angular[j].n_rows; ++r) {
        for (arma::uword c = 0; c < real.angular[j].n_cols; ++c) {
          if (std::abs(real.angular[j](r, c)) > 1e-9) {
            ++nonzeros;
            rows.insert(r);
          }
        }
      }
      if (nonzeros != expected) trial_ok = false;
      if (j == 0) {
        reference_rows = rows;
        if (rows != std::set<arma::uword>(real.true_row_support.begin(),
                                          real.true_row_support.end())) {
          trial_ok = false;
        }
      } else if (rows != reference_rows) {
        trial_ok = false;
      }
    }
    if (!trial_ok) ++bad;
  }
  std::ostringstream detail;
  detail << "realizations with wrong structure: " << bad << "/200";
  return {bad == 0, detail.str()};
}

// --- criterion 3: planted sparse recovery ------------------------------------
Outcome criterion_planted_recovery() {
  Rng rng(314159);
  SblHyperparams hp;
  hp.threshold = 1e-8;  // the solver must resolve below the certified error
  int hits = 0;
  for (int trial = 0; trial < 100; ++trial) {
    arma::cx_mat s(40, 60);
    for (arma::uword k = 0; k < s.n_elem; ++k) s(k) = rng.cgaussian();
    arma::cx_vec x0(60, arma::fill::zeros);
    for (std::uint64_t idx : rng.distinct(60, 3)) x0(idx) = rng.cgaussian();
    const arma::cx_vec y = s * x0;
    const auto res = uamp_sbl(y, s, hp);
    const double rel = std::pow(arma::norm(res.x - x0), 2) / std::pow(arma::norm(x0), 2);
    if (rel < 1e-4) ++hits;
  }
  std::ostringstream detail;
  detail << "recovered " << hits << "/100 (need >= 99)";
  return {hits >= 99, detail.str()};
}

// --- criterion 4: agreement with the covariance-form solver ------------------
Outcome criterion_oracle_agreement() {
  Rng rng(271828);
  int agreements = 0;
  for (int trial = 0; trial < 50; ++trial) {
    arma::cx_mat s(12, 16);
    for (arma::uword k = 0; k < s.n_elem; ++k) s(k) = rng.cgaussian();
    arma::cx_vec x0(16, arma::fill::zeros);
    for (std::uint64_t idx : rng.distinct(16, 2)) x0(idx) = rng.cgaussian();
    const double sigma2 = std::pow(arma::norm(x0), 2) / 16.0 * std::pow(10.0, -3.0);
    arma::cx_vec y = s * x0;
    for (arma::uword i = 0; i < y.n_elem; ++i) y(i) += std::sqrt(sigma2) * rng.cgaussian();
    const auto fast = uamp_sbl(y, s);
    const arma::cx_vec slow = classic_sbl_oracle(y, s, 1.0 / sigma2, 100);
    const double rel = std::pow(arma::norm(fast.x - slow), 2) / std::pow(arma::norm(slow), 2);
    if (rel < 1e-2) ++agreements;
  }
  std::ostringstream detail;
  detail << "agreed on " << agreements << "/50 (need >= 45)";
  return {agreements >= 45, detail.str()};
}

// --- criterion 5: row-support recovery ---------------------------------------
Outcome criterion_row_support() {
  SystemConfig cfg = desk();
  cfg.snr_db = 10.0;
  int exact_noisy = 0;
  for (arma::uword trial = 0; trial < 100; ++trial) {
    const Pipeline pipe = make_pipeline(cfg, trial);
    const auto rows = acquire_row_support(pipe.ms.observations, cfg.paths_bs_ris);
    if (rows == pipe.realization.true_row_support) ++exact_noisy;
  }
  cfg.snr_db = std::numeric_limits<double>::infinity();
  int exact_clean = 0;
  for (arma::uword trial = 0; trial < 100; ++trial) {
    const Pipeline pipe = make_pipeline(cfg, trial);
    const auto rows = acquire_row_support(pipe.ms.observations, cfg.paths_bs_ris);
    if (rows == pipe.realization.true_row_support) ++exact_clean;
  }
  std::ostringstream detail;
  detail << "10 dB: " << exact_noisy << "/100 (need >= 99); noiseless: " << exact_clean
         << "/100 (need 100)";
  return {exact_noisy >= 99 && exact_clean == 100, detail.str()};
}

// --- criterion 6: algorithm ordering at the default operating point ----------
Outcome criterion_ordering() {
  const SystemConfig cfg = desk();
  const std::vector<Algorithm> algos = {Algorithm::OracleLs, Algorithm::Pci, Algorithm::UampSbl,
                                        Algorithm::Omp};
  const SweepReport report = sweep(cfg, {}, SweepAxis::SnrDb, {0.0}, 50, algos);
  double oracle = 0, pci = 0, uamp = 0, omp = 0;
  for (const auto& row : report.rows) {
    if (row.algorithm == Algorithm::OracleLs) oracle = row.nmse_mean;
    if (row.algorithm == Algorithm::Pci) pci = row.nmse_mean;
    if (row.algorithm == Algorithm::UampSbl) uamp = row.nmse_mean;
    if (row.algorithm == Algorithm::Omp) omp = row.nmse_mean;
  }
  const bool ordered = oracle <= pci && pci <= uamp && uamp <= omp;
  const double gap_db = to_db(uamp) - to_db(pci);
  std::ostringstream detail;
  detail << "mean NMSE (dB): oracle=" << to_db(oracle) << " pci=" << to_db(pci)
         << " uamp_sbl=" << to_db(uamp) << " omp=" << to_db(omp) << "; pci gap=" << gap_db
         << " dB (need >= 1)";
  return {ordered && gap_db >= 1.0, detail.str()};
}

// --- criterion 7: monotone trends along pilots and SNR -----------------------
Outcome criterion_trends() {
  const SystemConfig cfg = desk();
  const std::vector<Algorithm> algos = {Algorithm::Pci};
  const SweepReport by_pilots = sweep(cfg, {}, SweepAxis::Pilots, {48, 96, 144}, 50, algos);
  const SweepReport by_snr = sweep(cfg, {}, SweepAxis::SnrDb, {-10, 0, 10}, 50, algos);

  const auto nonincreasing = [](const SweepReport& report, bool strict) {
    for (std::size_t k = 0; k + 1 < report.rows.size(); ++k) {
      const auto& a = report.rows[k];
      const auto& b = report.rows[k + 1];
      const double slack =
          strict ? 0.0 : std::sqrt(a.nmse_stderr * a.nmse_stderr + b.nmse_stderr * b.nmse_stderr);
      if (b.nmse_mean > a.nmse_mean + slack) return false;
    }
    return true;
  };

  const bool pilots_ok = nonincreasing(by_pilots, false);
  const bool snr_ok = nonincreasing(by_snr, false) &&
                      by_snr.rows.back().nmse_mean < by_snr.rows.front().nmse_mean;
  std::ostringstream detail;
  detail << "pilots trend (dB):";
  for (const auto& row : by_pilots.rows) detail << " " << to_db(row.nmse_mean);
  detail << "; snr trend (dB):";
  for (const auto& row : by_snr.rows) detail << " " << to_db(row.nmse_mean);
  return {pilots_ok && snr_ok, detail.str()};
}

// --- criterion 8: more shared columns help -----------------------------------
Outcome criterion_common_column_benefit() {
  const SystemConfig cfg = desk();
  const SweepReport report =
      sweep(cfg, {}, SweepAxis::CommonColumns, {2, 6}, 50, {Algorithm::Pci});
  const double with_two = report.rows[0].nmse_mean;
  const double with_six = report.rows[1].nmse_mean;
  std::ostringstream detail;
  detail << "mean NMSE (dB): pc2=" << to_db(with_two) << " pc6=" << to_db(with_six);
  return {with_six <= with_two, detail.str()};
}

// --- criterion 9: clustered sharing and misconfigured coupling ---------------
Outcome criterion_scenario2_coupling() {
  SystemConfig cfg = desk();
  cfg.scenario = Scenario::Two;
  cfg.clusters = 3;
  cfg.common_columns = 0;

  const SweepReport joint =
      sweep(cfg, {}, SweepAxis::SnrDb, {0.0}, 50, {Algorithm::PciAuto, Algorithm::UampSbl});
  double auto_nmse = 0, uamp_nmse = 0;
  for (const auto& row : joint.rows) {
    if (row.algorithm == Algorithm::PciAuto) auto_nmse = row.nmse_mean;
    if (row.algorithm == Algorithm::UampSbl) uamp_nmse = row.nmse_mean;
  }

  SystemConfig misconfigured = cfg;
  misconfigured.common_columns = 1;  // forces a globally shared column that does not exist
  const SweepReport fixed =
      sweep(misconfigured, {}, SweepAxis::SnrDb, {0.0}, 50, {Algorithm::PciFixed});
  const double fixed_nmse = fixed.rows[0].nmse_mean;

  std::ostringstream detail;
  detail << "mean NMSE (dB): pci_auto=" << to_db(auto_nmse) << " uamp_sbl=" << to_db(uamp_nmse)
         << " pci_fixed(pc=1)=" << to_db(fixed_nmse);
  return {auto_nmse <= uamp_nmse && fixed_nmse > auto_nmse, detail.str()};
}

// --- criterion 10: runtime scaling with the per-user path count --------------
Outcome criterion_complexity() {
  ScopedEnv serial("RIS_EST_THREADS", "1");  // serial trials for stable timing
  SystemConfig cfg = desk();
  const SweepReport table = bench_complexity(cfg, {}, {4, 6, 8, 10}, 12);

  std::vector<double> pci_times, omp_times;
  for (const auto& row : table.rows) {
    if (row.algorithm == Algorithm::Pci) pci_times.push_back(row.runtime_ms_mean);
    if (row.algorithm == Algorithm::Omp) omp_times.push_back(row.runtime_ms_mean);
  }
  const double ratio = pci_times.back() / pci_times.front();
  bool omp_increasing = true;
  for (std::size_t k = 0; k + 1 < omp_times.size(); ++k) {
    if (omp_times[k + 1] <= omp_times[k]) omp_increasing = false;
  }
  std::ostringstream detail;
  detail << "pci ms:";
  for (double t : pci_times) detail << " " << t;
  detail << " (ratio=" << ratio << ", need <= 1.5); omp ms:";
  for (double t : omp_times) detail << " " << t;
  return {ratio <= 1.5 && omp_increasing, detail.str()};
}

// --- criterion 11: iteration budget ------------------------------------------
Outcome criterion_iteration_budget() {
  const SystemConfig cfg = desk();
  int within_budget = 0;
  const arma::uword trials = 100;
  std::vector<int> flags(trials, 0);
  parallel_for(trials, [&](arma::uword trial) {
    const Pipeline pipe = make_pipeline(cfg, trial);
    const auto rows = acquire_row_support(pipe.ms.observations, cfg.paths_bs_ris);
    const auto est = uampsbl_pci(pipe.ms, cfg, {}, rows, CommonColumnMode::FixedPc);
    arma::uword worst = 0;
    for (arma::uword it : est.iterations) worst = std::max(worst, it);
    flags[trial] = worst <= 65 ? 1 : 0;
  });
  for (int f : flags) within_budget += f;
  std::ostringstream detail;
  detail << within_budget << "/100 trials kept every row within 65 iterations (need >= 95)";
  return {within_budget >= 95, detail.str()};
}

// --- criterion 12: byte-identical sweep reports -------------------------------
Outcome criterion_determinism() {
  const SystemConfig cfg = desk();
  const std::vector<Algorithm> algos = {Algorithm::Pci, Algorithm::UampSbl, Algorithm::Omp,
                                        Algorithm::OracleLs};
  const std::string first = sweep(cfg, {}, SweepAxis::SnrDb, {-5.0, 5.0}, 5, algos).to_csv();
  const std::string second = sweep(cfg, {}, SweepAxis::SnrDb, {-5.0, 5.0}, 5, algos).to_csv();
  std::ostringstream detail;
  detail << "CSV bytes: " << first.size() << " vs " << second.size()
         << (first == second ? " (identical)" : " (mismatch)");
  return {first == second, detail.str()};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "dictionary one-hot response", criterion_dictionary_one_hot},
      {2, "structured angular sparsity", criterion_sparsity_structure},
      {3, "planted sparse recovery", criterion_planted_recovery},
      {4, "agreement with the covariance solver", criterion_oracle_agreement},
      {5, "row-support recovery", criterion_row_support},
      {6, "algorithm ordering", criterion_ordering},
      {7, "monotone trends", criterion_trends},
      {8, "common-column benefit", criterion_common_column_benefit},
      {9, "clustered sharing", criterion_scenario2_coupling},
      {10, "runtime scaling", criterion_complexity},
      {11, "iteration budget", criterion_iteration_budget},
      {12, "report determinism", criterion_determinism},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : criteria()) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& err) {
      outcome = {false, std::string("exception: ") + err.what()};
    }
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.title
              << " -- " << outcome.detail << std::endl;
    if (!outcome.pass) ++failures;
  }
  return failures;
}

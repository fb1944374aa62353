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

#include "risest/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

namespace risest {

namespace {

// Indices 0..n-1 ordered by ascending key; equal keys keep ascending index.
std::vector<arma::uword> argsort_ascending(const arma::vec& keys) {
  std::vector<arma::uword> idx(keys.n_elem);
  std::iota(idx.begin(), idx.end(), arma::uword{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](arma::uword a, arma::uword b) { return keys(a) < keys(b); });
  return idx;
}

// Restricted least squares with a ridge fallback for rank-deficient systems.
arma::cx_vec restricted_ls(const arma::cx_mat& a, const arma::cx_vec& y) {
  arma::cx_vec x;
  if (arma::solve(x, a, y, arma::solve_opts::no_approx)) return x;
  arma::cx_mat gram = a.t() * a;
  gram.diag() += 1e-12;
  return arma::solve(gram, a.t() * arma::cx_vec(y), arma::solve_opts::likely_sympd);
}

void check_measurement_shapes(const MeasurementSet& ms) {
  if (ms.observations.empty()) {
    throw std::invalid_argument("estimator: no observations");
  }
  for (const arma::cx_mat& y : ms.observations) {
    if (y.n_rows != ms.sensing.n_rows) {
      throw std::invalid_argument("estimator: observation rows do not match the sensing matrix");
    }
    if (y.n_cols != ms.observations.front().n_cols) {
      throw std::invalid_argument("estimator: inconsistent observation shapes across users");
    }
  }
}

}  // namespace

namespace detail {

MmvState uamp_sbl_mmv(const arma::cx_mat& z, const arma::cx_mat& psi, const arma::vec& varpi,
                      const SblHyperparams& hp, double eps_init, const GammaHook& hook) {
  const arma::uword obs_dim = z.n_rows;
  const arma::uword users = z.n_cols;
  const arma::uword n = psi.n_cols;
  if (psi.n_rows != obs_dim || varpi.n_elem != obs_dim) {
    throw std::invalid_argument("uamp_sbl_mmv: transformed model shapes are inconsistent");
  }

  // The state initializations assume observations of unit per-entry power;
  // solve the rescaled model and map the outputs back afterwards.
  double data_scale =
      std::sqrt(arma::accu(arma::square(arma::abs(z))) / static_cast<double>(z.n_elem));
  if (!(data_scale > 0.0) || !std::isfinite(data_scale)) data_scale = 1.0;
  const arma::cx_mat z_scaled = z / data_scale;

  MmvState st;
  st.x.zeros(n, users);
  st.gamma.ones(n, users);
  st.beta.ones(users);
  st.eps.set_size(users);
  st.eps.fill(eps_init);

  arma::cx_mat e(obs_dim, users, arma::fill::zeros);
  arma::rowvec t_x(users, arma::fill::ones);
  arma::rowvec t_q(users);

  const auto as_cx = [](const arma::mat& real_part) {
    return arma::conv_to<arma::cx_mat>::from(real_part);
  };

  arma::uword i = 0;
  while (true) {
    // noisy linear stage
    arma::mat t_p = varpi * t_x;  // obs_dim x J
    arma::cx_mat p = psi * st.x - as_cx(t_p) % e;
    arma::mat scaled = t_p;
    scaled.each_row() %= st.beta;  // t_p * beta_j per column
    const arma::mat denom = 1.0 + scaled;
    const arma::mat v_r = t_p / denom;
    const arma::cx_mat r = (as_cx(scaled) % z_scaled + p) / as_cx(denom);

    for (arma::uword j = 0; j < users; ++j) {
      const double miss =
          std::pow(arma::norm(z_scaled.col(j) - r.col(j)), 2) + arma::accu(v_r.col(j));
      st.beta(j) = static_cast<double>(obs_dim) / std::max(miss, 1e-300);
    }

    arma::mat t_s = t_p;
    t_s.each_row() += 1.0 / st.beta;
    t_s = 1.0 / t_s;
    e = as_cx(t_s) % (z_scaled - p);

    // denoising stage
    for (arma::uword j = 0; j < users; ++j) {
      t_q(j) = static_cast<double>(n) / arma::dot(varpi, t_s.col(j));
    }
    arma::cx_mat q = psi.t() * e;
    q.each_row() %= arma::conv_to<arma::cx_rowvec>::from(t_q);
    q += st.x;

    arma::mat shrink = st.gamma;
    shrink.each_row() %= t_q;
    shrink += 1.0;
    for (arma::uword j = 0; j < users; ++j) {
      t_x(j) = (t_q(j) / static_cast<double>(n)) * arma::accu(1.0 / shrink.col(j));
    }
    const arma::cx_mat x_new = q / as_cx(shrink);

    for (arma::uword j = 0; j < users; ++j) {
      st.gamma.col(j) =
          (2.0 * st.eps(j) + 1.0) / (arma::square(arma::abs(x_new.col(j))) + t_x(j));
    }
    if (hook) hook(i, st.gamma);

    // shape update; the argument is nonnegative up to rounding
    for (arma::uword j = 0; j < users; ++j) {
      const double arg =
          std::log(arma::mean(st.gamma.col(j))) - arma::mean(arma::log(st.gamma.col(j)));
      if (arg < -1e-12) {
        throw std::logic_error("uamp_sbl_mmv: shape update argument went negative");
      }
      st.eps(j) = 0.5 * std::sqrt(std::max(arg, 0.0));
    }

    double change = 0.0;
    double magnitude = 0.0;
    for (arma::uword j = 0; j < users; ++j) {
      change += std::pow(arma::norm(x_new.col(j) - st.x.col(j)), 2);
      magnitude += std::pow(arma::norm(x_new.col(j)), 2);
    }
    st.x = x_new;
    ++i;

    if (!st.x.is_finite()) {
      throw std::runtime_error("uamp_sbl_mmv: state diverged at iteration " + std::to_string(i));
    }
    const double rel = magnitude > 0.0 ? change / magnitude : (change > 0.0 ? 1.0 : 0.0);
    if (rel <= hp.threshold || i > hp.max_iterations) break;
  }
  st.iterations = i;

  // map back to the caller's scale
  st.x *= data_scale;
  st.gamma /= data_scale * data_scale;
  st.beta /= data_scale * data_scale;
  return st;
}

}  // namespace detail

UampSblResult uamp_sbl(const arma::cx_vec& y, const arma::cx_mat& s, const SblHyperparams& hp) {
  if (s.n_elem == 0 || y.n_elem != s.n_rows) {
    throw std::invalid_argument("uamp_sbl: model dimensions are inconsistent");
  }
  const EconomySvd svd = economy_svd(s);
  const arma::cx_mat z = svd.u.t() * y;
  const arma::cx_mat psi = arma::diagmat(arma::cx_vec(svd.singular_values,
                                                      arma::vec(svd.singular_values.n_elem,
                                                                arma::fill::zeros))) *
                           svd.v.t();
  const arma::vec varpi = arma::square(svd.singular_values);

  const detail::MmvState st =
      detail::uamp_sbl_mmv(z, psi, varpi, hp, hp.epsilon_init.value_or(0.01), nullptr);

  UampSblResult out;
  out.x = st.x.col(0);
  out.gamma = st.gamma.col(0);
  out.beta = st.beta(0);
  out.iterations = st.iterations;
  return out;
}

arma::cx_vec classic_sbl_oracle(const arma::cx_vec& y, const arma::cx_mat& s,
                                double noise_precision, arma::uword iterations) {
  const arma::uword n = s.n_cols;
  const double eps = 0.001;
  arma::vec gamma(n, arma::fill::ones);
  arma::cx_vec mu(n, arma::fill::zeros);
  const arma::cx_mat gram = s.t() * s;
  const arma::cx_vec sy = s.t() * y;
  for (arma::uword it = 0; it < iterations; ++it) {
    arma::cx_mat a = noise_precision * gram;
    a.diag() += arma::cx_vec(gamma, arma::vec(n, arma::fill::zeros));
    arma::cx_mat sigma;
    if (!arma::inv_sympd(sigma, a)) {
      a.diag() += 1e-12;
      sigma = arma::inv(a);
    }
    mu = noise_precision * (sigma * sy);
    for (arma::uword k = 0; k < n; ++k) {
      gamma(k) = (2.0 * eps + 1.0) / (std::norm(mu(k)) + sigma(k, k).real());
    }
  }
  return mu;
}

std::vector<arma::uword> acquire_row_support(const std::vector<arma::cx_mat>& observations,
                                             arma::uword paths_bs_ris) {
  if (observations.empty()) {
    throw std::invalid_argument("acquire_row_support: no observations");
  }
  const arma::uword m = observations.front().n_cols;
  if (paths_bs_ris > m) {
    throw std::invalid_argument("acquire_row_support: more paths than candidate rows");
  }
  arma::vec energy(m, arma::fill::zeros);
  for (const arma::cx_mat& y : observations) {
    if (y.n_cols != m) {
      throw std::invalid_argument("acquire_row_support: inconsistent observation shapes");
    }
    energy += arma::sum(arma::square(arma::abs(y)), 0).t();
  }
  // largest energies win; stable sort keeps the lower index on ties
  std::vector<arma::uword> order = argsort_ascending(-energy);
  order.resize(paths_bs_ris);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<arma::uword> identify_common_columns_fixed(const arma::mat& gamma,
                                                       arma::uword paths_per_user,
                                                       arma::uword common_count) {
  if (common_count > paths_per_user) {
    throw std::invalid_argument("identify_common_columns_fixed: common count exceeds paths");
  }
  if (common_count == 0) return {};
  const arma::uword n = gamma.n_rows;
  const arma::uword users = gamma.n_cols;

  arma::uvec frequency(n, arma::fill::zeros);
  for (arma::uword j = 0; j < users; ++j) {
    std::vector<arma::uword> order = argsort_ascending(gamma.col(j));
    for (arma::uword k = 0; k < paths_per_user && k < n; ++k) {
      ++frequency(order[k]);
    }
  }
  const arma::vec aggregate = arma::sum(gamma, 1);

  std::vector<arma::uword> idx(n);
  std::iota(idx.begin(), idx.end(), arma::uword{0});
  std::sort(idx.begin(), idx.end(), [&](arma::uword a, arma::uword b) {
    if (frequency(a) != frequency(b)) return frequency(a) > frequency(b);
    if (aggregate(a) != aggregate(b)) return aggregate(a) < aggregate(b);
    return a < b;
  });
  idx.resize(std::min<std::size_t>(common_count, idx.size()));
  std::sort(idx.begin(), idx.end());
  return idx;
}

arma::mat auto_cluster(const arma::mat& gamma, double v1, double v2) {
  const arma::uword n = gamma.n_rows;
  const arma::uword users = gamma.n_cols;
  arma::mat shared(n, users, arma::fill::zeros);
  const double floor_value = gamma.min();
  for (arma::uword row = 0; row < n; ++row) {
    const arma::vec g = gamma.row(row).t();
    const std::vector<arma::uword> order = argsort_ascending(g);
    if (g(order[0]) > v1 * floor_value) continue;  // row holds no active entry
    double total = g(order[0]);
    arma::uword count = 1;
    double mean = total;
    while (count <= users - 1 && g(order[count]) < v2 * mean) {
      total += g(order[count]);
      ++count;
      mean = total / static_cast<double>(count);
    }
    for (arma::uword k = 0; k < count; ++k) {
      shared(row, order[k]) = mean;
    }
  }
  return shared;
}

EstimateResult uampsbl_pci(const MeasurementSet& ms, const SystemConfig& cfg,
                           const SblHyperparams& hp, const std::vector<arma::uword>& row_support,
                           CommonColumnMode mode) {
  check_measurement_shapes(ms);
  const arma::uword users = ms.observations.size();
  const arma::uword m = ms.observations.front().n_cols;
  const arma::uword n = ms.sensing.n_cols;
  for (arma::uword row : row_support) {
    if (row >= m) throw std::invalid_argument("uampsbl_pci: row support index out of range");
  }

  // one decomposition of the sensing matrix shared by every common row
  const EconomySvd svd = economy_svd(ms.sensing);
  const arma::vec varpi = arma::square(svd.singular_values);
  const arma::cx_mat psi =
      arma::diagmat(arma::cx_vec(svd.singular_values,
                                 arma::vec(svd.singular_values.n_elem, arma::fill::zeros))) *
      svd.v.t();
  const double eps_init = hp.epsilon_init.value_or(1.0);

  EstimateResult out;
  out.angular.assign(users, arma::cx_mat(m, n, arma::fill::zeros));
  out.row_support = row_support;
  out.iterations.reserve(row_support.size());

  for (arma::uword row : row_support) {
    arma::cx_mat z(svd.u.n_cols, users);
    for (arma::uword j = 0; j < users; ++j) {
      z.col(j) = svd.u.t() * ms.observations[j].col(row);
    }

    detail::GammaHook hook;
    if (mode == CommonColumnMode::FixedPc) {
      auto common = std::make_shared<std::vector<arma::uword>>();
      hook = [common, &cfg, &hp](arma::uword i, arma::mat& gamma) {
        if (i == hp.fast_scan_iteration) {
          *common = identify_common_columns_fixed(gamma, cfg.paths_ris_user, cfg.common_columns);
        } else if (i > hp.fast_scan_iteration) {
          for (arma::uword c : *common) {
            gamma.row(c).fill(arma::mean(gamma.row(c)));
          }
        }
      };
    } else {
      auto shared = std::make_shared<arma::mat>();
      hook = [shared, &hp](arma::uword i, arma::mat& gamma) {
        if (i == hp.fast_scan_iteration) {
          *shared = auto_cluster(gamma, hp.v1, hp.v2);
        } else if (i > hp.fast_scan_iteration) {
          for (arma::uword k = 0; k < shared->n_elem; ++k) {
            if ((*shared)(k) != 0.0) gamma(k) = (*shared)(k);
          }
        }
      };
    }

    const detail::MmvState st = detail::uamp_sbl_mmv(z, psi, varpi, hp, eps_init, hook);
    out.iterations.push_back(st.iterations);
    for (arma::uword j = 0; j < users; ++j) {
      out.angular[j].row(row) = st.x.col(j).t();
    }
  }
  return out;
}

EstimateResult omp_baseline(const MeasurementSet& ms, arma::uword sparsity_per_column,
                            double residual_tol) {
  check_measurement_shapes(ms);
  if (sparsity_per_column > ms.sensing.n_rows) {
    throw std::invalid_argument("omp_baseline: sparsity budget exceeds the measurement count");
  }
  const arma::uword users = ms.observations.size();
  const arma::uword m = ms.observations.front().n_cols;
  const arma::uword n = ms.sensing.n_cols;

  EstimateResult out;
  out.angular.assign(users, arma::cx_mat(m, n, arma::fill::zeros));
  out.iterations.reserve(users * m);

  for (arma::uword j = 0; j < users; ++j) {
    for (arma::uword col = 0; col < m; ++col) {
      const arma::cx_vec y = ms.observations[j].col(col);
      const double y_norm = arma::norm(y);
      if (y_norm == 0.0) {
        out.iterations.push_back(0);
        continue;
      }
      arma::cx_vec residual = y;
      std::vector<arma::uword> atoms;
      arma::cx_vec coeffs;
      while (atoms.size() < sparsity_per_column) {
        const arma::vec corr = arma::abs(ms.sensing.t() * residual);
        arma::uword best = 0;
        double best_value = -1.0;
        for (arma::uword k = 0; k < n; ++k) {
          const bool taken = std::find(atoms.begin(), atoms.end(), k) != atoms.end();
          if (!taken && corr(k) > best_value) {
            best_value = corr(k);
            best = k;
          }
        }
        atoms.push_back(best);
        const arma::cx_mat sub = ms.sensing.cols(arma::uvec(atoms));
        coeffs = restricted_ls(sub, y);
        residual = y - sub * coeffs;
        if (arma::norm(residual) <= residual_tol * y_norm) break;
      }
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        out.angular[j](col, atoms[k]) = std::conj(coeffs(k));
      }
      out.iterations.push_back(atoms.size());
    }
  }
  return out;
}

EstimateResult oracle_ls(const MeasurementSet& ms, const ChannelRealization& truth) {
  check_measurement_shapes(ms);
  const arma::uword users = ms.observations.size();
  const arma::uword m = ms.observations.front().n_cols;
  const arma::uword n = ms.sensing.n_cols;
  if (truth.true_column_supports.size() != users) {
    throw std::invalid_argument("oracle_ls: supports do not match the observation count");
  }

  EstimateResult out;
  out.angular.assign(users, arma::cx_mat(m, n, arma::fill::zeros));
  out.row_support = truth.true_row_support;

  for (arma::uword j = 0; j < users; ++j) {
    for (std::size_t rank = 0; rank < truth.true_row_support.size(); ++rank) {
      const arma::uword row = truth.true_row_support[rank];
      const std::vector<arma::uword>& cols = truth.true_column_supports[j][rank];
      if (cols.empty()) continue;
      const arma::cx_mat sub = ms.sensing.cols(arma::uvec(cols));
      const arma::cx_vec coeffs = restricted_ls(sub, ms.observations[j].col(row));
      for (std::size_t k = 0; k < cols.size(); ++k) {
        out.angular[j](row, cols[k]) = std::conj(coeffs(k));
      }
    }
  }
  return out;
}

EstimateResult uamp_sbl_channel(const MeasurementSet& ms, const SblHyperparams& hp) {
  check_measurement_shapes(ms);
  const arma::uword users = ms.observations.size();
  const arma::uword m = ms.observations.front().n_cols;
  const arma::uword n = ms.sensing.n_cols;

  const EconomySvd svd = economy_svd(ms.sensing);
  const arma::vec varpi = arma::square(svd.singular_values);
  const arma::cx_mat psi =
      arma::diagmat(arma::cx_vec(svd.singular_values,
                                 arma::vec(svd.singular_values.n_elem, arma::fill::zeros))) *
      svd.v.t();
  const double eps_init = hp.epsilon_init.value_or(0.01);

  EstimateResult out;
  out.angular.assign(users, arma::cx_mat(m, n, arma::fill::zeros));
  out.iterations.reserve(users * m);
  for (arma::uword j = 0; j < users; ++j) {
    for (arma::uword col = 0; col < m; ++col) {
      const arma::cx_mat z = svd.u.t() * ms.observations[j].col(col);
      const detail::MmvState st = detail::uamp_sbl_mmv(z, psi, varpi, hp, eps_init, nullptr);
      out.angular[j].row(col) = st.x.col(0).t();
      out.iterations.push_back(st.iterations);
    }
  }
  return out;
}

}  // namespace risest

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
#include <optional>
#include <vector>

#include "risest/measurement.hpp"

namespace risest {

struct SblHyperparams {
  double threshold = 1e-4;              // relative-change stopping criterion
  arma::uword max_iterations = 200;     // iteration cap
  arma::uword fast_scan_iteration = 10; // iteration at which supports are scanned
  double v1 = 5.0;                      // row-admission magnification (auto-clustering)
  double v2 = 5.0;                      // prefix-growth magnification (auto-clustering)
  // Initial shape parameter; unset picks the per-algorithm default
  // (0.01 for the single-vector solver, 1 for the joint multi-user solver).
  std::optional<double> epsilon_init;
};

struct UampSblResult {
  arma::cx_vec x;          // posterior mean estimate
  arma::vec gamma;         // learned precisions
  double beta = 0.0;       // learned noise precision
  arma::uword iterations = 0;
};

// Sparse recovery of x from y = s*x + noise via unitarily transformed
// approximate message passing with a Gamma hyperprior on the precisions.
UampSblResult uamp_sbl(const arma::cx_vec& y, const arma::cx_mat& s,
                       const SblHyperparams& hp = {});

// Covariance-based re-estimation solver for the same model with known noise
// precision. Cubic per iteration; intended for small verification instances.
arma::cx_vec classic_sbl_oracle(const arma::cx_vec& y, const arma::cx_mat& s,
                                double noise_precision, arma::uword iterations);

// Rows of the angular channel shared by all users, identified from the
// per-column energy of the transformed observations. Ascending indices.
std::vector<arma::uword> acquire_row_support(const std::vector<arma::cx_mat>& observations,
                                             arma::uword paths_bs_ris);

enum class CommonColumnMode { FixedPc, AutoCluster };

struct EstimateResult {
  std::vector<arma::cx_mat> angular;     // per user, M x N
  std::vector<arma::uword> row_support;  // rows estimated (empty if not applicable)
  std::vector<arma::uword> iterations;   // per solved subproblem
};

// Joint multi-user estimator: one multiple-measurement-vector solve per
// common row, with common-column identification feeding back into the
// precisions after the fast-scan iteration.
EstimateResult uampsbl_pci(const MeasurementSet& ms, const SystemConfig& cfg,
                           const SblHyperparams& hp, const std::vector<arma::uword>& row_support,
                           CommonColumnMode mode);

// Columns most frequently among the per-user smallest precisions. Ties break
// by smaller aggregate precision, then lower index. Ascending indices.
std::vector<arma::uword> identify_common_columns_fixed(const arma::mat& gamma,
                                                       arma::uword paths_per_user,
                                                       arma::uword common_count);

// Sort-and-grow clustering of each precision row; returns the shared-value
// map (zeros where no cluster was formed).
arma::mat auto_cluster(const arma::mat& gamma, double v1, double v2);

// Greedy orthogonal matching pursuit, independently per user and per column.
EstimateResult omp_baseline(const MeasurementSet& ms, arma::uword sparsity_per_column,
                            double residual_tol);

// Least squares restricted to the true supports; the performance lower bound.
EstimateResult oracle_ls(const MeasurementSet& ms, const ChannelRealization& truth);

// Whole-channel baseline: the single-vector solver run on every column of
// every user's observation matrix, sharing one sensing-matrix decomposition.
EstimateResult uamp_sbl_channel(const MeasurementSet& ms, const SblHyperparams& hp = {});

namespace detail {

// Joint state of the multi-user solver after the final iteration.
struct MmvState {
  arma::cx_mat x;      // N x J posterior means
  arma::mat gamma;     // N x J precisions
  arma::rowvec beta;   // per-user noise precisions
  arma::rowvec eps;    // per-user shape parameters
  arma::uword iterations = 0;
};

// Called after each precision update with the 0-based iteration index; may
// rewrite gamma in place (support coupling).
using GammaHook = std::function<void(arma::uword iteration, arma::mat& gamma)>;

// Multi-measurement-vector iteration core on the transformed model
// z = psi*x + noise, with psi = diag(singular values) * v^H and
// varpi the squared singular values padded to the row count of z.
MmvState uamp_sbl_mmv(const arma::cx_mat& z, const arma::cx_mat& psi, const arma::vec& varpi,
                      const SblHyperparams& hp, double eps_init, const GammaHook& hook);

}  // namespace detail

}  // namespace risest

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

#include "risest/numerics.hpp"

#include <numbers>
#include <stdexcept>

namespace risest {

namespace {

// Normalized n-point DFT matrix: F(a,b) = exp(-2*pi*i*a*b/n) / sqrt(n).
arma::cx_mat dft_matrix(arma::uword n) {
  arma::cx_mat f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (arma::uword a = 0; a < n; ++a) {
    for (arma::uword b = 0; b < n; ++b) {
      // reduce a*b mod n first so the phase argument stays small and exact
      const double phase = step * static_cast<double>((a * b) % n);
      f(a, b) = std::polar(scale, phase);
    }
  }
  return f;
}

arma::cx_vec dft_column(arma::uword n, arma::uword k) {
  arma::cx_vec c(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (arma::uword l = 0; l < n; ++l) {
    c(l) = std::polar(scale, step * static_cast<double>((l * k) % n));
  }
  return c;
}

}  // namespace

UnitaryDictionary dft_dictionary(arma::uword rows_factor, arma::uword cols_factor) {
  if (rows_factor < 1 || cols_factor < 1) {
    throw std::invalid_argument("dft_dictionary: factors must be at least 1");
  }
  UnitaryDictionary dict;
  dict.rows_factor = rows_factor;
  dict.cols_factor = cols_factor;
  dict.matrix = arma::kron(dft_matrix(rows_factor), dft_matrix(cols_factor));
  return dict;
}

arma::cx_vec steering_vector(GridAngle grid, arma::uword rows_factor, arma::uword cols_factor) {
  if (rows_factor < 1 || cols_factor < 1) {
    throw std::invalid_argument("steering_vector: factors must be at least 1");
  }
  if (grid.row_index >= rows_factor || grid.col_index >= cols_factor) {
    throw std::invalid_argument("steering_vector: grid angle outside the dictionary grid");
  }
  return arma::kron(dft_column(rows_factor, grid.row_index),
                    dft_column(cols_factor, grid.col_index));
}

EconomySvd economy_svd(const arma::cx_mat& m) {
  if (m.n_elem == 0) throw std::invalid_argument("economy_svd: empty matrix");
  EconomySvd out;
  if (!arma::svd_econ(out.u, out.singular_values, out.v, m)) {
    throw std::runtime_error("economy_svd: decomposition did not converge");
  }
  return out;
}

}  // namespace risest

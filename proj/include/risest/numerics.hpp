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

#include <armadillo>

namespace risest {

// Position on the discretized angular grid of a planar array with
// rows_factor x cols_factor elements. Angles are kept as integer
// spatial-frequency indices; index arithmetic is exact.
struct GridAngle {
  arma::uword row_index = 0;
  arma::uword col_index = 0;
};

// Unitary angular dictionary of a uniform planar array: the Kronecker
// product of two normalized DFT matrices, one per array axis. Column
// row_index*cols_factor + col_index is the steering vector of that grid angle.
struct UnitaryDictionary {
  arma::uword rows_factor = 0;
  arma::uword cols_factor = 0;
  arma::cx_mat matrix;

  arma::uword size() const { return rows_factor * cols_factor; }
  arma::uword column_of(GridAngle g) const { return g.row_index * cols_factor + g.col_index; }
  GridAngle angle_of(arma::uword column) const {
    return {column / cols_factor, column % cols_factor};
  }
};

UnitaryDictionary dft_dictionary(arma::uword rows_factor, arma::uword cols_factor);

// Unit-norm array response of the given grid angle; equals the matching
// dictionary column exactly.
arma::cx_vec steering_vector(GridAngle grid, arma::uword rows_factor, arma::uword cols_factor);

// Kronecker product (re-exported); dimensions multiply.
using arma::kron;

struct EconomySvd {
  arma::cx_mat u;             // m.n_rows x r, orthonormal columns
  arma::vec singular_values;  // length r = min(rows, cols), nonincreasing
  arma::cx_mat v;             // m.n_cols x r, orthonormal columns
};

// Thin SVD: m = u * diag(singular_values) * v^H.
EconomySvd economy_svd(const arma::cx_mat& m);

}  // namespace risest

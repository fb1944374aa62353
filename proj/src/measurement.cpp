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

#include "risest/measurement.hpp"

#include <cmath>
#include <stdexcept>

namespace risest {

RisSchedule make_ris_schedule(arma::uword ris_elements, arma::uword pilots, Rng& rng) {
  if (ris_elements < 1 || pilots < 1) {
    throw std::invalid_argument("make_ris_schedule: dimensions must be at least 1");
  }
  RisSchedule schedule;
  schedule.phases.set_size(ris_elements, pilots);
  // column-major fill keeps the draw order independent of how entries are read
  for (arma::uword t = 0; t < pilots; ++t) {
    for (arma::uword e = 0; e < ris_elements; ++e) {
      schedule.phases(e, t) = rng.unit_phase();
    }
  }
  return schedule;
}

std::vector<arma::cx_mat> observe(const ChannelRealization& realization,
                                  const RisSchedule& schedule, double noise_variance, Rng& rng) {
  if (noise_variance < 0.0) {
    throw std::invalid_argument("observe: noise variance must be nonnegative");
  }
  const arma::uword users = realization.cascaded.size();
  std::vector<arma::cx_mat> raw(users);
  const double noise_scale = std::sqrt(noise_variance);
  for (arma::uword j = 0; j < users; ++j) {
    if (realization.cascaded[j].n_cols != schedule.phases.n_rows) {
      throw std::invalid_argument("observe: schedule does not match the channel dimensions");
    }
    arma::cx_mat y = realization.cascaded[j] * schedule.phases;
    if (noise_variance > 0.0) {
      for (arma::uword t = 0; t < y.n_cols; ++t) {
        for (arma::uword a = 0; a < y.n_rows; ++a) {
          y(a, t) += noise_scale * rng.cgaussian();
        }
      }
    }
    raw[j] = std::move(y);
  }
  return raw;
}

MeasurementSet to_cs_model(const std::vector<arma::cx_mat>& raw, const RisSchedule& schedule,
                           const UnitaryDictionary& bs_dict, const UnitaryDictionary& ris_dict) {
  MeasurementSet ms;
  ms.sensing = (ris_dict.matrix.t() * schedule.phases).t();
  ms.observations.reserve(raw.size());
  for (const arma::cx_mat& y : raw) {
    if (y.n_rows != bs_dict.size()) {
      throw std::invalid_argument("to_cs_model: observation rows do not match the BS dictionary");
    }
    ms.observations.push_back((bs_dict.matrix.t() * y).t());
  }
  return ms;
}

double calibrate_noise(double snr_db, const ChannelRealization& realization,
                       const RisSchedule& schedule) {
  double power = 0.0;
  arma::uword entries = 0;
  for (const arma::cx_mat& h : realization.cascaded) {
    const arma::cx_mat y = h * schedule.phases;
    power += arma::accu(arma::square(arma::abs(y)));
    entries += y.n_elem;
  }
  if (entries == 0 || power <= 0.0) {
    throw std::invalid_argument("calibrate_noise: noiseless signal has zero power");
  }
  return (power / static_cast<double>(entries)) * std::pow(10.0, -snr_db / 10.0);
}

}  // namespace risest

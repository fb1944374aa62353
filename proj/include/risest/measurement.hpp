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

#include <vector>

#include "risest/channel.hpp"

namespace risest {

// RIS phase configuration per time slot; entries are unit modulus.
struct RisSchedule {
  arma::cx_mat phases;  // N x T
};

RisSchedule make_ris_schedule(arma::uword ris_elements, arma::uword pilots, Rng& rng);

// Pilot observations in estimation form: observations[j] and the sensing
// matrix satisfy observations[j] ~= sensing * angular[j]^H up to noise.
struct MeasurementSet {
  std::vector<arma::cx_mat> observations;  // per user, T x M
  arma::cx_mat sensing;                    // T x N
  double noise_variance = 0.0;
};

// Raw received pilots per user (M x T): cascaded channel times the schedule
// plus complex Gaussian noise of the given per-entry variance.
std::vector<arma::cx_mat> observe(const ChannelRealization& realization,
                                  const RisSchedule& schedule, double noise_variance, Rng& rng);

// Unitary transform of the raw observations into the sparse-recovery model.
MeasurementSet to_cs_model(const std::vector<arma::cx_mat>& raw, const RisSchedule& schedule,
                           const UnitaryDictionary& bs_dict, const UnitaryDictionary& ris_dict);

// Noise variance matching the requested SNR: mean per-entry power of the
// noiseless received signal across users, times 10^(-snr_db/10).
double calibrate_noise(double snr_db, const ChannelRealization& realization,
                       const RisSchedule& schedule);

}  // namespace risest

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

#include <string>

#include "risest/measurement.hpp"

namespace risest {

// Flat binary dump of a realization plus its measurements. Little-endian;
// complex entries stored row-major as interleaved (real, imag) 64-bit floats.
// Full record layout is documented in the README.
struct TrialDump {
  SystemConfig config;
  ChannelRealization realization;
  MeasurementSet measurements;
};

void save_dump(const std::string& path, const TrialDump& dump);
TrialDump load_dump(const std::string& path);

}  // namespace risest

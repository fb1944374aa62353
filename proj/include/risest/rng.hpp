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

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace risest {

// One splitmix64 step; used only for seed/stream derivation.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic random stream. All randomness flows from a root seed through
// explicit (seed, stream) derivations, so concurrent trials reproduce
// bit-for-bit regardless of scheduling. Uniform and Gaussian variates are
// produced from raw engine words (not std::distributions, whose output is
// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : material_(mix(seed, 0)) { reseed(); }
  Rng(std::uint64_t seed, std::uint64_t stream) : material_(mix(mix(seed, 0), stream)) { reseed(); }

  // Child stream derived from the seed material alone, independent of any
  // draws already made from this stream.
  Rng fork(std::uint64_t stream) const {
    Rng child;
    child.material_ = mix(material_, stream + 1);
    child.reseed();
    return child;
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n). Masked rejection, unbiased.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::uniform_int: n must be positive");
    if (n == 1) return 0;
    const std::uint64_t mask = std::bit_ceil(n) - 1;
    std::uint64_t v;
    do {
      v = engine_() & mask;
    } while (v >= n);
    return v;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller (pairs cached).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Circular complex Gaussian with unit total variance.
  std::complex<double> cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

  // e^{i phi} with phi uniform on [0, 2*pi).
  std::complex<double> unit_phase() {
    const double phi = 2.0 * std::numbers::pi * uniform();
    return {std::cos(phi), std::sin(phi)};
  }

  // k distinct values from [0, n), partial Fisher-Yates, unbiased.
  std::vector<std::uint64_t> distinct(std::uint64_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("Rng::distinct: k exceeds population size");
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
    return take(std::move(pool), k);
  }

  // k distinct elements sampled from a pool, partial Fisher-Yates.
  std::vector<std::uint64_t> take(std::vector<std::uint64_t> pool, std::size_t k) {
    if (k > pool.size()) throw std::invalid_argument("Rng::take: k exceeds pool size");
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform_int(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  Rng() = default;

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + 0x9e3779b97f4a7c15ull * (2 * b + 1);
    (void)splitmix64_next(s);
    return splitmix64_next(s);
  }

  void reseed() {
    engine_.seed(material_);
    has_spare_ = false;
    spare_ = 0.0;
  }

  std::uint64_t material_ = 0;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace risest

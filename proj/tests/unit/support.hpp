// Copyright 2026 The emconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "emconv/harness/config.hpp"
#include "emconv/model.hpp"
#include "emconv/units.hpp"

namespace emconv::testing {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Draw {
  std::array<ResonatorMode, 2> resonators;
  MechanicalMode mech;
  ConverterState state;
  std::array<double, 2> detunings;
};

/// Random red-detuned, sideband-resolved operating point.
inline Draw random_draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
  Draw d;
  d.mech.omega_m = kTwoPi * log_uniform(1e6, 2e7);
  d.mech.gamma_m = kTwoPi * log_uniform(1.0, 100.0);
  for (auto& r : d.resonators) {
    r.omega = kTwoPi * log_uniform(4e9, 1.2e10);
    const double kappa = d.mech.omega_m * log_uniform(1e-3, 0.1);
    const double eta = 0.05 + 0.95 * u(rng);
    r.kappa_ex = eta * kappa;
    r.kappa_in = kappa - r.kappa_ex;
  }
  std::array<double, 2> g{};
  for (std::size_t i = 0; i < 2; ++i) {
    const double coop = log_uniform(1e-2, 1e3);
    g[i] = std::sqrt(coop * d.mech.gamma_m * d.resonators[i].kappa() / 4.0);
    d.detunings[i] = d.mech.omega_m;
  }
  d.state = state_from_couplings(g, d.resonators, d.mech);
  return d;
}

/// Per-quadrature sigma for a complex-Gaussian noise floor `snr_db` below the
/// mean signal power.
template <typename Values>
double sigma_for_snr(const Values& values, double snr_db) {
  double p = 0.0;
  for (const auto& v : values) p += std::norm(v);
  p /= static_cast<double>(values.size());
  return std::sqrt(0.5 * p * std::pow(10.0, -snr_db / 10.0));
}

inline double percentile95(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(v.size()))) - 1;
  return v[k];
}

}  // namespace emconv::testing

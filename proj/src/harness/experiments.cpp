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

#include "emconv/harness/experiments.hpp"

#include <tbb/parallel_for.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "emconv/error.hpp"
#include "emconv/fitters.hpp"
#include "emconv/scattering.hpp"
#include "emconv/units.hpp"

namespace emconv::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Evaluates f(k) for k in [0, n) concurrently into slot k.
template <typename Row, typename F>
std::vector<Row> evaluate_rows(std::size_t n, F&& f) {
  std::vector<Row> rows(n);
  tbb::parallel_for(std::size_t{0}, n, [&](std::size_t k) { rows[k] = f(k); });
  return rows;
}

GridRow grid_point(const DeviceConfig& config, double c1, double c2) {
  const std::array<double, 2> eta = config.eta();
  GridRow row;
  row.c1 = c1;
  row.c2 = c2;
  row.s11 = reflection_on_resonance(c1, c2, eta[0]);
  row.s22 = reflection_on_resonance(c2, c1, eta[1]);
  row.t = conversion_efficiency({c1, c2}, eta);
  return row;
}

}  // namespace

std::vector<GridRow> run_cooperativity_grid(const DeviceConfig& config, std::span<const double> c1,
                                            std::span<const double> c2) {
  config.validate();
  for (double c : c1) require(c >= 0.0, "cooperativity must be >= 0");
  for (double c : c2) require(c >= 0.0, "cooperativity must be >= 0");
  const std::size_t n2 = c2.size();
  return evaluate_rows<GridRow>(c1.size() * n2, [&](std::size_t k) {
    const double a = c1[k / n2];
    const double b = c2[k % n2];
    GridRow row = grid_point(config, a, b);
    const bool can_drive = config.drives[0].g0 > 0.0 && config.drives[1].g0 > 0.0;
    row.p1_dbm = can_drive ? drive_power_for_cooperativity(a, config.drives[0], config.resonators[0],
                                                           config.mechanics)
                           : kNaN;
    row.p2_dbm = can_drive ? drive_power_for_cooperativity(b, config.drives[1], config.resonators[1],
                                                           config.mechanics)
                           : kNaN;
    return row;
  });
}

std::vector<GridRow> run_power_grid(const DeviceConfig& config, std::span<const double> p1_dbm,
                                    std::span<const double> p2_dbm) {
  config.validate();
  const std::size_t n2 = p2_dbm.size();
  return evaluate_rows<GridRow>(p1_dbm.size() * n2, [&](std::size_t k) {
    DeviceConfig c = config;
    c.drives[0].p_applied = p1_dbm[k / n2];
    c.drives[1].p_applied = p2_dbm[k % n2];
    const ConverterState state = c.state();
    GridRow row = grid_point(c, state.coop[0], state.coop[1]);
    row.p1_dbm = c.drives[0].p_applied;
    row.p2_dbm = c.drives[1].p_applied;
    return row;
  });
}

Table grid_table(const std::vector<GridRow>& rows) {
  Table t{{"p1_dbm", "p2_dbm", "c1", "c2", "s11", "s22", "t"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.p1_dbm, r.p2_dbm, r.c1, r.c2, r.s11, r.s22, r.t});
  return t;
}

std::vector<BandwidthRow> run_bandwidth_sweep(const DeviceConfig& config, std::span<const double> coops,
                                              std::size_t points, double span_linewidths) {
  config.validate();
  require(points >= 5, "bandwidth sweep needs at least 5 points");
  return evaluate_rows<BandwidthRow>(coops.size(), [&](std::size_t k) {
    BandwidthRow row;
    row.coop = coops[k];
    try {
      DeviceConfig c = config;
      c.match_cooperativity(coops[k], coops[k]);
      const ConverterState state = c.state();
      const double half = 0.5 * span_linewidths * state.total_linewidth;
      std::vector<double> delta(points);
      for (std::size_t q = 0; q < points; ++q) {
        delta[q] = -half + 2.0 * half * static_cast<double>(q) / static_cast<double>(points - 1);
      }
      ComplexSpectrum spec = conversion_spectrum(c.resonators, c.detunings(), c.mechanics, state, delta);
      for (auto& v : spec.value) v = std::norm(v);
      FitProblem problem;
      problem.model = ForwardModel::Lorentzian;
      problem.data = {spec};
      const FitResult fit = fit_lorentzian(problem);
      row.fwhm_hz = fit.value("fwhm");
      row.peak = fit.value("peak") + fit.value("offset");
      row.expected_fwhm_hz = angular_to_hz(state.total_linewidth);
      row.relative_error = std::abs(row.fwhm_hz - row.expected_fwhm_hz) / row.expected_fwhm_hz;
      row.converged = fit.converged;
      row.within_tolerance = row.converged && row.relative_error <= kBandwidthTolerance;
    } catch (const Error&) {
      row.fwhm_hz = row.peak = row.expected_fwhm_hz = row.relative_error = kNaN;
      row.converged = false;
      row.within_tolerance = false;
    }
    return row;
  });
}

Table bandwidth_table(const std::vector<BandwidthRow>& rows) {
  Table t{{"coop", "fwhm_hz", "expected_fwhm_hz", "peak", "relative_error", "converged", "within_tolerance"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.coop, r.fwhm_hz, r.expected_fwhm_hz, r.peak, r.relative_error,
                      r.converged ? 1.0 : 0.0, r.within_tolerance ? 1.0 : 0.0});
  }
  return t;
}

std::vector<NoiseRow> run_noise_budget(const DeviceConfig& config, std::span<const std::array<double, 2>> powers) {
  config.validate();
  if (!config.heating[0] || !config.heating[1]) {
    fail(ErrorCategory::Config, "noise budget needs heating models for both resonators");
  }
  return evaluate_rows<NoiseRow>(powers.size(), [&](std::size_t k) {
    DeviceConfig c = config;
    c.drives[0].p_applied = powers[k][0];
    c.drives[1].p_applied = powers[k][1];
    const ConverterState state = c.state();
    NoiseRow row;
    row.p_dbm = powers[k];
    row.n_drive = state.n_drive;
    row.coop = state.coop;
    double n_mech = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      row.budget.n_res[i] = state.n_drive[i] > 0.0 ? heating_occupancy(*c.heating[i], state.n_drive[i]) : 0.0;
      n_mech = std::max(n_mech, cooled_occupancy(c.mechanics.n_bath, state.coop[i], row.budget.n_res[i]));
    }
    row.budget.n_mech = n_mech;
    row.in_regime = std::min(state.coop[0], state.coop[1]) >= c.noise_coop_threshold;
    if (row.in_regime) {
      row.budget.n_add = added_noise(c.eta(), row.budget.n_res, n_mech);
    } else {
      row.budget.n_add = {kNaN, kNaN};
    }
    return row;
  });
}

Table noise_table(const std::vector<NoiseRow>& rows) {
  Table t{{"p1_dbm", "p2_dbm", "n_drive1", "n_drive2", "c1", "c2", "n_res1", "n_res2", "n_mech", "n_add1", "n_add2",
           "in_regime"},
          {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.p_dbm[0], r.p_dbm[1], r.n_drive[0], r.n_drive[1], r.coop[0], r.coop[1], r.budget.n_res[0],
                      r.budget.n_res[1], r.budget.n_mech, r.budget.n_add[0], r.budget.n_add[1],
                      r.in_regime ? 1.0 : 0.0});
  }
  return t;
}

std::vector<CoolingRow> run_cooling(const DeviceConfig& config, std::size_t resonator,
                                    std::span<const double> powers_dbm) {
  config.validate();
  require(resonator < 2, "resonator index must be 0 or 1");
  return evaluate_rows<CoolingRow>(powers_dbm.size(), [&](std::size_t k) {
    DeviceConfig c = config;
    c.drives[resonator].p_applied = powers_dbm[k];
    c.drives[1 - resonator].p_applied = -std::numeric_limits<double>::infinity();
    const ConverterState state = c.state();
    CoolingRow row;
    row.p_dbm = powers_dbm[k];
    row.n_drive = state.n_drive[resonator];
    row.coop = state.coop[resonator];
    row.n_res = (c.heating[resonator] && row.n_drive > 0.0) ? heating_occupancy(*c.heating[resonator], row.n_drive)
                                                            : 0.0;
    row.n_mech = cooled_occupancy(c.mechanics.n_bath, row.coop, row.n_res);
    row.mode_temperature_k = occupancy_temperature(c.mechanics.omega_m, row.n_mech);
    return row;
  });
}

Table cooling_table(const std::vector<CoolingRow>& rows) {
  Table t{{"p_dbm", "n_drive", "coop", "n_res", "n_mech", "mode_temperature_k"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.p_dbm, r.n_drive, r.coop, r.n_res, r.n_mech, r.mode_temperature_k});
  }
  return t;
}

DynamicRangeResult run_dynamic_range(const DeviceConfig& config, std::span<const double> flux,
                                     const EtaBounds& bounds) {
  config.validate();
  for (double f : flux) require(std::isfinite(f) && f >= 0.0, "signal flux must be >= 0");
  const ConverterState state = config.state();
  DynamicRangeResult out;
  out.coop = state.coop;
  out.model_transmission = conversion_efficiency(state.coop, config.eta());
  out.band_low = conversion_efficiency(state.coop, {bounds.eta1[0], bounds.eta2[0]});
  out.band_high = conversion_efficiency(state.coop, {bounds.eta1[1], bounds.eta2[1]});
  out.flux.assign(flux.begin(), flux.end());
  if (!flux.empty()) {
    const double t = peak_transmission(config.resonators, config.detunings(), config.mechanics, state,
                                       config.transmission_span_linewidths);
    // no compression: the response does not depend on the signal level
    out.transmission.assign(flux.size(), t);
  }
  return out;
}

Table dynamic_range_table(const DynamicRangeResult& result) {
  Table t{{"flux_photons_per_s", "t", "band_low", "band_high"}, {}};
  for (std::size_t k = 0; k < result.flux.size(); ++k) {
    t.rows.push_back({result.flux[k], result.transmission[k], result.band_low, result.band_high});
  }
  return t;
}

}  // namespace emconv::harness

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

#include <Eigen/Dense>

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "emconv/minimize.hpp"
#include "emconv/model.hpp"
#include "emconv/scattering.hpp"

namespace emconv {

enum class ForwardModel { SingleReflection, TwoModeEit, Lorentzian, PowerLaw };

std::string_view forward_model_name(ForwardModel model);
ForwardModel parse_forward_model(std::string_view name);

/// How a parameter converts at the I/O boundary. AngularRate values are
/// written out in Hz.
enum class ParameterUnit { AngularRate, Radians, Seconds, Dimensionless, Data };

struct FitParameter {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
  ParameterUnit unit = ParameterUnit::Dimensionless;
  bool held = false;
  bool at_bound = false;
};

struct FitResult {
  ForwardModel model = ForwardModel::SingleReflection;
  std::vector<FitParameter> params;
  Eigen::MatrixXd covariance;                 // in `params` order
  std::map<std::string, double> derived;      // eta, cooperativities, ...
  std::map<std::string, double> derived_std_error;
  double residual_norm = 0.0;                 // final cost, 0.5 |r|^2
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool identifiable = true;
  std::string message;

  const FitParameter& param(std::string_view name) const;
  double value(std::string_view name) const { return param(name).value; }
};

/// Resonator and line data held fixed while fitting the two-tone EIT response.
struct EitContext {
  std::array<ResonatorMode, 2> resonators;
  std::array<double, 2> drive_omega{};
  std::array<LineCalibration, 2> calibrations;
  /// Source of held mechanical parameters and of fallbacks for initialization.
  MechanicalMode mechanics_prior;
};

/// Real-valued fits (Lorentzian, power law) read `value[k].real()`; power-law
/// data carries the drive photon number in `freq_hz`.
struct FitProblem {
  ForwardModel model = ForwardModel::SingleReflection;
  std::vector<ComplexSpectrum> data;
  std::map<std::string, double> initial_guess;
  std::map<std::string, Bounds> bounds;
  std::set<std::string> held;
  /// Optional per-point residual multipliers (1/sigma), one vector per spectrum.
  std::vector<std::vector<double>> weights;
  Tolerances tolerances;
  std::optional<EitContext> eit;
};

FitResult fit(const FitProblem& problem);

/// Parameters omega_0, kappa, kappa_ex, phase, delay of the calibrated
/// single-resonator reflection. Throws Initialization if the window does not
/// contain a resonance dip.
FitResult fit_single_reflection(const FitProblem& problem);

/// Parameters g_1, g_2, gamma_m, omega_m fitted jointly to both reflection
/// windows; resonators, drive frequencies and calibration come from
/// `problem.eit`. Reports C_i = 4 g_i^2 / (kappa_i gamma_m).
FitResult fit_two_mode_eit(const FitProblem& problem);

/// Parameters center, fwhm, peak, offset of
/// offset + peak (fwhm/2)^2 / ((x - center)^2 + (fwhm/2)^2).
FitResult fit_lorentzian(const FitProblem& problem);

/// Parameters amplitude, exponent of y = amplitude (x / reference_n)^exponent,
/// least squares in log-log space; reference_n is the geometric mean of x.
FitResult fit_power_law(const FitProblem& problem);

double lorentzian(double x, double center, double fwhm, double peak, double offset);

}  // namespace emconv

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

#include "emconv/fitters.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "emconv/error.hpp"
#include "emconv/units.hpp"

namespace emconv {

namespace {

constexpr double kPi = 3.14159265358979323846;

// One fit variable in physical units, mapped to x = (p - origin) / scale for
// the minimizer so every variable is O(1).
struct ParamDef {
  std::string name;
  double start = 0.0;
  double origin = 0.0;
  double scale = 1.0;
  Bounds bounds;
  bool held = false;
};

struct Solved {
  std::vector<double> p;
  Eigen::MatrixXd cov;
  std::vector<bool> at_bound;
  MinimizeResult min;
};

using ModelResidual = std::function<void(std::span<const double> p, std::span<double> r)>;

void apply_overrides(std::vector<ParamDef>& defs, const FitProblem& problem) {
  for (auto& d : defs) {
    if (auto it = problem.initial_guess.find(d.name); it != problem.initial_guess.end()) {
      d.start = it->second;
    }
    if (auto it = problem.bounds.find(d.name); it != problem.bounds.end()) {
      d.bounds = it->second;
    }
    if (problem.held.contains(d.name)) {
      d.held = true;
    }
    require(std::isfinite(d.start), "initial guess for " + d.name + " is not finite");
    if (problem.initial_guess.contains(d.name) || problem.bounds.contains(d.name)) {
      require(d.bounds.contains(d.start), "initial guess for " + d.name + " is outside its bounds");
    } else {
      d.start = d.bounds.clamp(d.start);
    }
  }
}

Solved solve(const std::vector<ParamDef>& defs, std::size_t m, const ModelResidual& model, const Tolerances& tol) {
  const std::size_t n = defs.size();
  std::vector<std::size_t> free_idx;
  for (std::size_t j = 0; j < n; ++j) {
    if (!defs[j].held) free_idx.push_back(j);
  }

  std::vector<double> base(n);
  for (std::size_t j = 0; j < n; ++j) base[j] = defs[j].start;

  auto to_physical = [&](std::span<const double> x) {
    std::vector<double> p = base;
    for (std::size_t k = 0; k < free_idx.size(); ++k) {
      const ParamDef& d = defs[free_idx[k]];
      p[free_idx[k]] = d.origin + d.scale * x[k];
    }
    return p;
  };

  Solved out;
  if (free_idx.empty()) {
    out.p = base;
    out.cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    out.at_bound.assign(n, false);
    std::vector<double> r(m);
    model(base, r);
    out.min.cost = 0.5 * std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
    out.min.converged = true;
    out.min.stop = StopReason::Gradient;
    return out;
  }

  std::vector<double> x0;
  std::vector<Bounds> xb;
  for (std::size_t j : free_idx) {
    const ParamDef& d = defs[j];
    x0.push_back((d.start - d.origin) / d.scale);
    xb.push_back({(d.bounds.lower - d.origin) / d.scale, (d.bounds.upper - d.origin) / d.scale});
  }
  const ResidualFunction fn = [&](std::span<const double> x, std::span<double> r) {
    const std::vector<double> p = to_physical(x);
    model(p, r);
  };
  out.min = minimize(fn, m, x0, xb, tol);
  out.p = to_physical(out.min.x);
  out.cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.at_bound.assign(n, false);
  for (std::size_t a = 0; a < free_idx.size(); ++a) {
    out.at_bound[free_idx[a]] = out.min.active[a];
    for (std::size_t b = 0; b < free_idx.size(); ++b) {
      out.cov(static_cast<Eigen::Index>(free_idx[a]), static_cast<Eigen::Index>(free_idx[b])) =
          defs[free_idx[a]].scale * defs[free_idx[b]].scale *
          out.min.covariance(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
  return out;
}

struct Reported {
  std::string name;
  ParameterUnit unit;
  double value;
  Eigen::RowVectorXd row;  // d(value)/d(fit variables)
  std::size_t source;      // fit variable whose held/bound flags carry over
};

FitResult assemble(ForwardModel model, const std::vector<ParamDef>& defs, const Solved& solved,
                   const std::vector<Reported>& reported) {
  FitResult out;
  out.model = model;
  const auto nr = static_cast<Eigen::Index>(reported.size());
  Eigen::MatrixXd t(nr, static_cast<Eigen::Index>(defs.size()));
  for (Eigen::Index k = 0; k < nr; ++k) t.row(k) = reported[static_cast<std::size_t>(k)].row;
  out.covariance = t * solved.cov * t.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  for (Eigen::Index k = 0; k < nr; ++k) {
    const Reported& r = reported[static_cast<std::size_t>(k)];
    FitParameter p;
    p.name = r.name;
    p.unit = r.unit;
    p.value = r.value;
    p.std_error = std::sqrt(std::max(out.covariance(k, k), 0.0));
    p.held = defs[r.source].held;
    p.at_bound = solved.at_bound[r.source];
    out.params.push_back(p);
  }
  out.residual_norm = solved.min.cost;
  out.gradient_norm = solved.min.gradient_norm;
  out.iterations = solved.min.iterations;
  out.converged = solved.min.converged;
  out.message = std::string("stop: ") + std::string(stop_reason_name(solved.min.stop));
  return out;
}

Eigen::RowVectorXd unit_row(std::size_t n, std::size_t j, double v = 1.0) {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
  row(static_cast<Eigen::Index>(j)) = v;
  return row;
}

double weight(const FitProblem& problem, std::size_t spectrum, std::size_t k) {
  if (spectrum >= problem.weights.size() || problem.weights[spectrum].empty()) return 1.0;
  return problem.weights[spectrum][k];
}

void check_weights(const FitProblem& problem) {
  require(problem.weights.size() <= problem.data.size(), "more weight vectors than spectra");
  for (std::size_t s = 0; s < problem.weights.size(); ++s) {
    require(problem.weights[s].empty() || problem.weights[s].size() == problem.data[s].size(),
            "weight vector length does not match its spectrum");
    for (double w : problem.weights[s]) require(std::isfinite(w) && w >= 0.0, "weights must be finite and >= 0");
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

double wrap_phase(double phi) {
  double w = std::remainder(phi, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

std::vector<double> unwrap(const std::vector<double>& phase) {
  std::vector<double> out(phase.size());
  double offset = 0.0;
  for (std::size_t k = 0; k < phase.size(); ++k) {
    if (k > 0) {
      const double d = phase[k] + offset - out[k - 1];
      offset -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    }
    out[k] = phase[k] + offset;
  }
  return out;
}

// Least-squares slope of y against x.
double slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

std::vector<double> running_mean(const std::vector<double>& v, std::size_t half) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(v.size() - 1, k + half);
    double s = 0.0;
    for (std::size_t q = lo; q <= hi; ++q) s += v[q];
    out[k] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

// Width between the crossings of `level` on either side of `peak` for a curve
// that is above the level at the peak (or below, with `below` set).
double crossing_width(std::span<const double> x, const std::vector<double>& y, std::size_t peak, double level,
                      bool below) {
  auto past = [&](std::size_t k) { return below ? y[k] >= level : y[k] <= level; };
  auto interp = [&](std::size_t a, std::size_t b) {
    const double t = (level - y[a]) / (y[b] - y[a]);
    return x[a] + t * (x[b] - x[a]);
  };
  std::optional<double> left;
  std::optional<double> right;
  for (std::size_t k = peak; k > 0; --k) {
    if (past(k - 1)) {
      left = interp(k, k - 1);
      break;
    }
  }
  for (std::size_t k = peak; k + 1 < y.size(); ++k) {
    if (past(k + 1)) {
      right = interp(k, k + 1);
      break;
    }
  }
  if (left && right) return *right - *left;
  if (left) return 2.0 * (x[peak] - *left);
  if (right) return 2.0 * (*right - x[peak]);
  return 0.0;
}

// ---------------------------------------------------------------------------
// Single-resonator reflection

struct ReflectionGuess {
  double omega_0;
  double kappa;
  double kappa_ex;
  double phase;   // phi
  double delay;
};

ReflectionGuess guess_reflection(const ComplexSpectrum& data) {
  const std::size_t n = data.size();
  require(n >= 16, "single-reflection fit needs at least 16 points");
  std::vector<double> omega(n);
  std::vector<double> mag(n);
  std::vector<double> arg(n);
  for (std::size_t k = 0; k < n; ++k) {
    omega[k] = hz_to_angular(data.freq_hz[k]);
    mag[k] = std::abs(data.value[k]);
    arg[k] = std::arg(data.value[k]);
  }
  const std::size_t edge = std::max<std::size_t>(n / 10, 3);

  // delay from the off-resonant phase slope, one regression per wing
  const std::vector<double> phase = unwrap(arg);
  const double s_left = slope(std::span(omega).first(edge), std::span(phase).first(edge));
  const double s_right = slope(std::span(omega).last(edge), std::span(phase).last(edge));
  const double delay = std::max(0.0, -0.5 * (s_left + s_right));

  std::vector<double> wing_mag;
  Complex wing_sum{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    if (k < edge || k >= n - edge) {
      wing_mag.push_back(mag[k]);
      wing_sum += data.value[k] * std::exp(Complex(0.0, omega[k] * delay));
    }
  }
  const double baseline = median(wing_mag);
  const double phase_offset = -std::arg(wing_sum);

  // resonance candidates: significant local minima of the smoothed magnitude
  const std::size_t half = std::max<std::size_t>(n / 400, 1);
  const std::vector<double> smooth = running_mean(mag, half);
  const std::size_t global = static_cast<std::size_t>(std::min_element(smooth.begin(), smooth.end()) - smooth.begin());
  const double max_depth = baseline - smooth[global];
  if (!(max_depth > 0.01 * baseline)) {
    fail(ErrorCategory::Initialization, "no resonance dip found in the reflection window");
  }
  std::vector<std::size_t> candidates;
  const std::size_t guard = std::max<std::size_t>(n / 50, 2);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (smooth[k] <= smooth[k - 1] && smooth[k] < smooth[k + 1] && baseline - smooth[k] > 0.5 * max_depth) {
      if (candidates.empty() || k - candidates.back() > guard) {
        candidates.push_back(k);
      } else if (smooth[k] < smooth[candidates.back()]) {
        candidates.back() = k;
      }
    }
  }
  if (candidates.empty()) candidates.push_back(global);

  std::vector<double> mag2(n);
  for (std::size_t k = 0; k < n; ++k) mag2[k] = smooth[k] * smooth[k];
  auto width_of = [&](std::size_t c) {
    const double level = 0.5 * (baseline * baseline + mag2[c]);
    return crossing_width(omega, mag2, c, level, true);
  };

  std::size_t best = candidates.front();
  if (candidates.size() > 1) {
    // prefer the larger phase winding (overcoupled target modes wind ~2 pi)
    double best_winding = -1.0;
    for (std::size_t c : candidates) {
      const double w = std::max(width_of(c), omega[1] - omega[0]);
      std::vector<double> local;
      for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(omega[k] - omega[c]) <= 3.0 * w) local.push_back(arg[k] + omega[k] * delay);
      }
      const std::vector<double> uw = unwrap(local);
      const double winding = uw.empty() ? 0.0 : std::abs(uw.back() - uw.front());
      if (winding > best_winding + 0.5) {
        best_winding = winding;
        best = c;
      }
    }
  }
  if (best < guard || best + guard >= n) {
    fail(ErrorCategory::Initialization, "reflection window does not bracket the resonance");
  }

  // refine the minimum with a parabola through the raw magnitudes
  double omega_0 = omega[best];
  {
    const double y0 = mag[best - 1], y1 = mag[best], y2 = mag[best + 1];
    const double den = y0 - 2.0 * y1 + y2;
    if (den > 0.0) {
      const double shift = 0.5 * (y0 - y2) / den;
      if (std::abs(shift) < 1.0) omega_0 += shift * (omega[best + 1] - omega[best]);
    }
  }
  double kappa = width_of(best);
  if (!(kappa > 0.0)) kappa = 4.0 * (omega[1] - omega[0]);

  const Complex centre = data.value[best] / baseline * std::exp(Complex(0.0, phase_offset + omega[best] * delay));
  const double eta = std::clamp(0.5 * (1.0 - centre.real()), 0.02, 0.999);
  return {omega_0, kappa, eta * kappa, phase_offset, delay};
}

// ---------------------------------------------------------------------------
// Two-mode EIT

struct EitGuess {
  std::array<double, 2> g;
  double gamma_m;
  double omega_m;
  bool feature_found;
};

}  // namespace

const FitParameter& FitResult::param(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return p;
  }
  fail(ErrorCategory::InvalidInput, "fit result has no parameter '" + std::string(name) + "'");
}

std::string_view forward_model_name(ForwardModel model) {
  switch (model) {
    case ForwardModel::SingleReflection: return "single-reflection";
    case ForwardModel::TwoModeEit: return "two-mode-eit";
    case ForwardModel::Lorentzian: return "lorentzian";
    case ForwardModel::PowerLaw: return "power-law";
  }
  return "unknown";
}

ForwardModel parse_forward_model(std::string_view name) {
  if (name == "single-reflection" || name == "single") return ForwardModel::SingleReflection;
  if (name == "two-mode-eit" || name == "eit") return ForwardModel::TwoModeEit;
  if (name == "lorentzian") return ForwardModel::Lorentzian;
  if (name == "power-law" || name == "powerlaw") return ForwardModel::PowerLaw;
  fail(ErrorCategory::InvalidInput, "unknown forward model '" + std::string(name) + "'");
}

double lorentzian(double x, double center, double fwhm, double peak, double offset) {
  const double hw = 0.5 * fwhm;
  const double d = x - center;
  return offset + peak * hw * hw / (d * d + hw * hw);
}

FitResult fit(const FitProblem& problem) {
  switch (problem.model) {
    case ForwardModel::SingleReflection: return fit_single_reflection(problem);
    case ForwardModel::TwoModeEit: return fit_two_mode_eit(problem);
    case ForwardModel::Lorentzian: return fit_lorentzian(problem);
    case ForwardModel::PowerLaw: return fit_power_law(problem);
  }
  fail(ErrorCategory::Internal, "unhandled forward model");
}

FitResult fit_single_reflection(const FitProblem& problem) {
  require(problem.data.size() == 1, "single-reflection fit takes exactly one spectrum");
  const ComplexSpectrum& data = problem.data.front();
  data.validate();
  check_weights(problem);

  const ReflectionGuess g = guess_reflection(data);
  const std::size_t n = data.size();
  std::vector<double> omega(n);
  for (std::size_t k = 0; k < n; ++k) omega[k] = hz_to_angular(data.freq_hz[k]);
  const double span = std::max(omega.back() - omega.front(), g.kappa);

  // Phase is carried at the reference omega_c = initial omega_0 so it does
  // not trade off against the delay.
  const double omega_c = problem.initial_guess.contains("omega_0") ? problem.initial_guess.at("omega_0") : g.omega_0;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<ParamDef> defs = {
      {"omega_0", g.omega_0, g.omega_0, g.kappa, {}, false},
      {"kappa_in", g.kappa - g.kappa_ex, 0.0, g.kappa, {0.0, inf}, false},
      {"kappa_ex", g.kappa_ex, 0.0, g.kappa, {1e-9 * g.kappa, inf}, false},
      {"phase_ref", wrap_phase(g.phase + omega_c * g.delay), 0.0, 1.0, {}, false},
      {"delay", g.delay, 0.0, 1.0 / span, {0.0, inf}, false},
  };
  // user overrides in reported names
  FitProblem adjusted = problem;
  if (auto it = problem.initial_guess.find("kappa"); it != problem.initial_guess.end()) {
    const double kex = problem.initial_guess.contains("kappa_ex") ? problem.initial_guess.at("kappa_ex") : g.kappa_ex;
    adjusted.initial_guess["kappa_in"] = it->second - kex;
  }
  if (auto it = problem.initial_guess.find("phase"); it != problem.initial_guess.end()) {
    const double tau = problem.initial_guess.contains("delay") ? problem.initial_guess.at("delay") : g.delay;
    adjusted.initial_guess["phase_ref"] = it->second + omega_c * tau;
  }
  if (problem.held.contains("phase")) adjusted.held.insert("phase_ref");
  if (problem.held.contains("kappa")) adjusted.held.insert("kappa_in");
  apply_overrides(defs, adjusted);

  const ModelResidual model = [&](std::span<const double> p, std::span<double> r) {
    const double omega_0 = p[0], kappa = p[1] + p[2], kappa_ex = p[2], phase_ref = p[3], delay = p[4];
    for (std::size_t k = 0; k < n; ++k) {
      const Complex cal = std::exp(Complex(0.0, -(phase_ref + (omega[k] - omega_c) * delay)));
      const Complex s = cal * (1.0 - kappa_ex / Complex(kappa / 2.0, omega_0 - omega[k]));
      const Complex d = (s - data.value[k]) * weight(problem, 0, k);
      r[2 * k] = d.real();
      r[2 * k + 1] = d.imag();
    }
  };
  const Solved solved = solve(defs, 2 * n, model, problem.tolerances);
  const auto& p = solved.p;
  const std::size_t np = defs.size();

  Eigen::RowVectorXd kappa_row = unit_row(np, 1) + unit_row(np, 2);
  Eigen::RowVectorXd phase_row = unit_row(np, 3) - unit_row(np, 4, omega_c);
  std::vector<Reported> reported = {
      {"omega_0", ParameterUnit::AngularRate, p[0], unit_row(np, 0), 0},
      {"kappa", ParameterUnit::AngularRate, p[1] + p[2], kappa_row, 1},
      {"kappa_ex", ParameterUnit::AngularRate, p[2], unit_row(np, 2), 2},
      {"phase", ParameterUnit::Radians, wrap_phase(p[3] - omega_c * p[4]), phase_row, 3},
      {"delay", ParameterUnit::Seconds, p[4], unit_row(np, 4), 4},
  };
  FitResult out = assemble(ForwardModel::SingleReflection, defs, solved, reported);
  const double kappa = p[1] + p[2];
  out.derived["eta"] = p[2] / kappa;
  out.derived["kappa_in"] = p[1];
  out.derived["q_in"] = p[1] > 0.0 ? p[0] / p[1] : std::numeric_limits<double>::infinity();
  out.derived["q_ex"] = p[0] / p[2];
  out.derived["q_loaded"] = p[0] / kappa;
  return out;
}

namespace {

EitGuess guess_eit(const FitProblem& problem, const EitContext& ctx, const std::array<std::vector<double>, 2>& rot) {
  EitGuess out{};
  out.feature_found = false;
  std::array<std::vector<Complex>, 2> dev;
  std::array<double, 2> detuning{};
  for (std::size_t w = 0; w < 2; ++w) {
    detuning[w] = ctx.resonators[w].omega - ctx.drive_omega[w];
    const ComplexSpectrum& data = problem.data[w];
    const ResonatorMode& res = ctx.resonators[w];
    for (std::size_t k = 0; k < data.size(); ++k) {
      const double lab = hz_to_angular(data.freq_hz[k]);
      const Complex cal = ctx.calibrations[w].factor(lab);
      const Complex bare = 1.0 - res.kappa_ex / Complex(res.kappa() / 2.0, detuning[w] - rot[w][k]);
      dev[w].push_back(data.value[k] / cal - bare);
    }
  }

  // strongest mechanical feature over both windows, compared with the noise
  std::array<std::vector<double>, 2> smooth_abs2;
  std::array<double, 2> peak_value{};
  std::array<std::size_t, 2> peak_idx{};
  double best = -1.0;
  std::size_t best_w = 0;
  double noise_floor = 0.0;
  for (std::size_t w = 0; w < 2; ++w) {
    const std::size_t n = dev[w].size();
    const std::size_t half = std::max<std::size_t>(n / 200, 1);
    std::vector<double> re(n), im(n), resid;
    for (std::size_t k = 0; k < n; ++k) {
      re[k] = dev[w][k].real();
      im[k] = dev[w][k].imag();
    }
    const std::vector<double> sre = running_mean(re, half);
    const std::vector<double> sim = running_mean(im, half);
    smooth_abs2[w].resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      smooth_abs2[w][k] = sre[k] * sre[k] + sim[k] * sim[k];
      resid.push_back(std::abs(re[k] - sre[k]));
      resid.push_back(std::abs(im[k] - sim[k]));
    }
    const double sigma = 1.4826 * median(resid) / std::sqrt(static_cast<double>(2 * half + 1));
    noise_floor = std::max(noise_floor, sigma);
    peak_idx[w] = static_cast<std::size_t>(std::max_element(smooth_abs2[w].begin(), smooth_abs2[w].end()) -
                                           smooth_abs2[w].begin());
    peak_value[w] = std::sqrt(smooth_abs2[w][peak_idx[w]]);
    if (peak_value[w] > best) {
      best = peak_value[w];
      best_w = w;
    }
  }
  if (!(best > 8.0 * noise_floor + 1e-9)) {
    return out;
  }
  out.feature_found = true;
  out.omega_m = rot[best_w][peak_idx[best_w]];
  const double half_level = 0.5 * smooth_abs2[best_w][peak_idx[best_w]];
  double total = crossing_width(rot[best_w], smooth_abs2[best_w], peak_idx[best_w], half_level, false);
  if (!(total > 0.0)) total = 0.25 * (rot[best_w].back() - rot[best_w].front());

  // |dev_i| at line center ~ 2 eta_i Gamma_i / Gamma
  std::array<double, 2> big_gamma{};
  for (std::size_t w = 0; w < 2; ++w) {
    const auto it = std::min_element(rot[w].begin(), rot[w].end(), [&](double a, double b) {
      return std::abs(a - out.omega_m) < std::abs(b - out.omega_m);
    });
    const auto k = static_cast<std::size_t>(it - rot[w].begin());
    const double amp = std::sqrt(smooth_abs2[w][k]);
    big_gamma[w] = std::clamp(total * amp / (2.0 * ctx.resonators[w].eta()), 0.0, total);
  }
  out.gamma_m = std::max(total - big_gamma[0] - big_gamma[1], 0.02 * total);
  for (std::size_t w = 0; w < 2; ++w) {
    const double floor_gamma = 0.01 * total;
    out.g[w] = std::sqrt(std::max(big_gamma[w], floor_gamma) * ctx.resonators[w].kappa() / 4.0);
  }
  return out;
}

}  // namespace

FitResult fit_two_mode_eit(const FitProblem& problem) {
  require(problem.data.size() == 2, "two-mode EIT fit takes one spectrum per resonator window");
  require(problem.eit.has_value(), "two-mode EIT fit needs the held resonator parameters");
  const EitContext& ctx = *problem.eit;
  for (const auto& d : problem.data) d.validate();
  for (const auto& r : ctx.resonators) r.validate();
  check_weights(problem);

  std::array<std::vector<double>, 2> lab;
  std::array<std::vector<double>, 2> rot;
  std::array<double, 2> detuning{};
  for (std::size_t w = 0; w < 2; ++w) {
    detuning[w] = ctx.resonators[w].omega - ctx.drive_omega[w];
    for (double f : problem.data[w].freq_hz) {
      lab[w].push_back(hz_to_angular(f));
      rot[w].push_back(hz_to_angular(f) - ctx.drive_omega[w]);
    }
  }

  EitGuess guess = guess_eit(problem, ctx, rot);
  if (!guess.feature_found) {
    FitResult out;
    out.model = ForwardModel::TwoModeEit;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.params = {{"g_1", 0.0, nan, ParameterUnit::AngularRate, false, false},
                  {"g_2", 0.0, nan, ParameterUnit::AngularRate, false, false},
                  {"gamma_m", nan, nan, ParameterUnit::AngularRate, false, false},
                  {"omega_m", nan, nan, ParameterUnit::AngularRate, false, false}};
    out.covariance = Eigen::MatrixXd::Constant(4, 4, nan);
    out.converged = false;
    out.identifiable = false;
    out.message = "no mechanical feature above the noise: g_1 = g_2 = 0, mechanical parameters unidentifiable";
    return out;
  }
  if (problem.held.contains("gamma_m") && !problem.initial_guess.contains("gamma_m")) {
    guess.gamma_m = ctx.mechanics_prior.gamma_m;
  }
  if (problem.held.contains("omega_m") && !problem.initial_guess.contains("omega_m")) {
    guess.omega_m = ctx.mechanics_prior.omega_m;
  }

  const double total = guess.gamma_m + 4.0 * guess.g[0] * guess.g[0] / ctx.resonators[0].kappa() +
                       4.0 * guess.g[1] * guess.g[1] / ctx.resonators[1].kappa();
  const double inf = std::numeric_limits<double>::infinity();
  std::array<double, 2> g_scale{};
  for (std::size_t w = 0; w < 2; ++w) {
    g_scale[w] = std::max(guess.g[w], 0.1 * std::sqrt(total * ctx.resonators[w].kappa() / 4.0));
  }
  std::vector<ParamDef> defs = {
      {"g_1", guess.g[0], 0.0, g_scale[0], {0.0, inf}, false},
      {"g_2", guess.g[1], 0.0, g_scale[1], {0.0, inf}, false},
      {"gamma_m", guess.gamma_m, 0.0, std::max(guess.gamma_m, 0.01 * total), {1e-9 * total, inf}, false},
      {"omega_m", guess.omega_m, guess.omega_m, total, {}, false},
  };
  apply_overrides(defs, problem);

  std::size_t m = 0;
  for (const auto& d : problem.data) m += 2 * d.size();
  const ModelResidual model = [&](std::span<const double> p, std::span<double> r) {
    const MechanicalMode mech{p[3], p[2], 0.0};
    ConverterState state;
    state.g = {p[0], p[1]};
    std::size_t q = 0;
    for (std::size_t w = 0; w < 2; ++w) {
      const Port port = w == 0 ? Port::One : Port::Two;
      const ComplexSpectrum& data = problem.data[w];
      for (std::size_t k = 0; k < data.size(); ++k) {
        const Complex s = ctx.calibrations[w].factor(lab[w][k]) *
                          eit_reflection(ctx.resonators, detuning, mech, state, port, rot[w][k]);
        const Complex d = (s - data.value[k]) * weight(problem, w, k);
        r[q++] = d.real();
        r[q++] = d.imag();
      }
    }
  };
  const Solved solved = solve(defs, m, model, problem.tolerances);
  const auto& p = solved.p;
  std::vector<Reported> reported;
  const std::array<const char*, 4> names = {"g_1", "g_2", "gamma_m", "omega_m"};
  for (std::size_t j = 0; j < 4; ++j) {
    reported.push_back({names[j], ParameterUnit::AngularRate, p[j], unit_row(4, j), j});
  }
  FitResult out = assemble(ForwardModel::TwoModeEit, defs, solved, reported);

  const double gamma_m = p[2];
  double linewidth = gamma_m;
  for (std::size_t w = 0; w < 2; ++w) {
    const double kappa = ctx.resonators[w].kappa();
    const double big_gamma = 4.0 * p[w] * p[w] / kappa;
    const double coop = big_gamma / gamma_m;
    linewidth += big_gamma;
    const std::string suffix = std::to_string(w + 1);
    out.derived["big_gamma_" + suffix] = big_gamma;
    out.derived["coop_" + suffix] = coop;
    // delta method on C = 4 g^2 / (kappa gamma_m)
    Eigen::Vector4d grad = Eigen::Vector4d::Zero();
    grad(static_cast<Eigen::Index>(w)) = 8.0 * p[w] / (kappa * gamma_m);
    grad(2) = -coop / gamma_m;
    out.derived_std_error["coop_" + suffix] = std::sqrt(std::max(grad.dot(out.covariance * grad), 0.0));
  }
  out.derived["total_linewidth"] = linewidth;
  if (p[0] == 0.0 && p[1] == 0.0) {
    out.identifiable = false;
    out.converged = false;
    out.message = "fitted couplings vanished: mechanical parameters unidentifiable";
  }
  return out;
}

FitResult fit_lorentzian(const FitProblem& problem) {
  require(problem.data.size() == 1, "Lorentzian fit takes exactly one spectrum");
  const ComplexSpectrum& data = problem.data.front();
  data.validate();
  check_weights(problem);
  const std::size_t n = data.size();
  require(n >= 5, "Lorentzian fit needs at least 5 points");
  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) y[k] = data.value[k].real();
  const std::span<const double> x(data.freq_hz);

  const std::size_t edge = std::max<std::size_t>(n / 10, 1);
  std::vector<double> wings(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(edge));
  wings.insert(wings.end(), y.end() - static_cast<std::ptrdiff_t>(edge), y.end());
  const double offset = median(wings);
  const auto top = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double peak = y[top] - offset;
  if (!(peak > 0.0)) {
    fail(ErrorCategory::Initialization, "no peak above the baseline in the power spectrum");
  }
  double fwhm = crossing_width(x, y, top, offset + 0.5 * peak, false);
  if (!(fwhm > 0.0)) fwhm = 0.25 * (x.back() - x.front());

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<ParamDef> defs = {
      {"center", x[top], x[top], fwhm, {}, false},
      {"fwhm", fwhm, 0.0, fwhm, {1e-12 * fwhm, inf}, false},
      {"peak", peak, 0.0, peak, {}, false},
      {"offset", offset, 0.0, peak, {}, false},
  };
  apply_overrides(defs, problem);
  const ModelResidual model = [&](std::span<const double> p, std::span<double> r) {
    for (std::size_t k = 0; k < n; ++k) {
      r[k] = (lorentzian(x[k], p[0], p[1], p[2], p[3]) - y[k]) * weight(problem, 0, k);
    }
  };
  const Solved solved = solve(defs, n, model, problem.tolerances);
  std::vector<Reported> reported;
  const std::array<const char*, 4> names = {"center", "fwhm", "peak", "offset"};
  for (std::size_t j = 0; j < 4; ++j) {
    reported.push_back({names[j], ParameterUnit::Data, solved.p[j], unit_row(4, j), j});
  }
  return assemble(ForwardModel::Lorentzian, defs, solved, reported);
}

FitResult fit_power_law(const FitProblem& problem) {
  require(problem.data.size() == 1, "power-law fit takes exactly one data series");
  const ComplexSpectrum& data = problem.data.front();
  data.validate();
  check_weights(problem);
  const std::size_t n = data.size();
  require(n >= 2, "power-law fit needs at least 2 points");
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double xv = data.freq_hz[k];
    const double yv = data.value[k].real();
    require(xv > 0.0 && yv > 0.0 && std::isfinite(yv), "power-law data must be positive");
    lx[k] = std::log(xv);
    ly[k] = std::log(yv);
  }
  const double log_ref = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  for (double& v : lx) v -= log_ref;
  const double exponent = slope(lx, ly);
  const double log_amp = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);

  std::vector<ParamDef> defs = {
      {"log_amplitude", log_amp, log_amp, 1.0, {}, false},
      {"exponent", exponent, exponent, 1.0, {}, false},
  };
  FitProblem adjusted = problem;
  if (auto it = problem.initial_guess.find("amplitude"); it != problem.initial_guess.end()) {
    require(it->second > 0.0, "amplitude guess must be positive");
    adjusted.initial_guess["log_amplitude"] = std::log(it->second);
  }
  if (problem.held.contains("amplitude")) adjusted.held.insert("log_amplitude");
  adjusted.bounds.erase("amplitude");
  apply_overrides(defs, adjusted);
  const ModelResidual model = [&](std::span<const double> p, std::span<double> r) {
    for (std::size_t k = 0; k < n; ++k) {
      r[k] = (p[0] + p[1] * lx[k] - ly[k]) * weight(problem, 0, k);
    }
  };
  const Solved solved = solve(defs, n, model, problem.tolerances);
  const double amplitude = std::exp(solved.p[0]);
  std::vector<Reported> reported = {
      {"amplitude", ParameterUnit::Dimensionless, amplitude, unit_row(2, 0, amplitude), 0},
      {"exponent", ParameterUnit::Dimensionless, solved.p[1], unit_row(2, 1), 1},
  };
  FitResult out = assemble(ForwardModel::PowerLaw, defs, solved, reported);
  out.derived["reference_n"] = std::exp(log_ref);
  return out;
}

}  // namespace emconv

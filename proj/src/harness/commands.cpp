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

#include "emconv/harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "emconv/error.hpp"
#include "emconv/fitters.hpp"
#include "emconv/harness/calibration.hpp"
#include "emconv/harness/experiments.hpp"
#include "emconv/harness/io.hpp"
#include "emconv/harness/synth.hpp"
#include "emconv/units.hpp"

namespace emconv::harness {

namespace {

using nlohmann::json;

double parse_number(std::string_view key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCategory::InvalidInput, "option '" + std::string(key) + "' is not a number: '" + text + "'");
}

std::size_t parse_count(const CommandOptions& o, std::string_view key, std::size_t fallback) {
  const double v = o.number(key, static_cast<double>(fallback));
  require(v >= 1.0 && v == std::floor(v) && v < 1e8, "option '" + std::string(key) + "' must be a positive integer");
  return static_cast<std::size_t>(v);
}

Port parse_port(const CommandOptions& o) {
  const std::string p = o.get("port", "1");
  if (p == "1") return Port::One;
  if (p == "2") return Port::Two;
  fail(ErrorCategory::InvalidInput, "port must be 1 or 2, got '" + p + "'");
}

std::vector<double> axis_or(const CommandOptions& o, std::string_view name, std::vector<double> fallback) {
  const Axis* a = o.axis(name);
  return a ? a->values : std::move(fallback);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

json options_json(const CommandOptions& o) {
  json axes = json::array();
  for (const auto& a : o.axes) axes.push_back({{"name", a.name}, {"values", a.values}});
  json data = json::array();
  for (const auto& d : o.data) data.push_back(d.generic_string());
  return {{"values", o.values}, {"axes", axes}, {"data", data}, {"format", o.format}};
}

class Writer {
 public:
  Writer(std::string_view verb, const DeviceConfig& config, const CommandOptions& options,
         const std::filesystem::path& out_dir)
      : verb_(verb), config_(config), options_(options), out_dir_(out_dir) {
    summary_["command"] = verb_;
    summary_["files"] = json::array();
  }

  void write(const std::string& name, const std::string& text, const json& extra = json::object()) {
    const std::filesystem::path file = out_dir_ / name;
    write_text(file, text);
    json meta = {{"tool", kToolName},     {"version", kToolVersion},       {"command", verb_},
                 {"seed", options_.seed}, {"config", config_.format()},   {"options", options_json(options_)}};
    for (const auto& [k, v] : extra.items()) meta[k] = v;
    write_metadata(file, meta);
    summary_["files"].push_back(name);
  }

  void write_json(const std::string& name, const json& j) {
    write_text(out_dir_ / name, j.dump(2) + "\n");
    summary_["files"].push_back(name);
  }

  json& summary() { return summary_; }

 private:
  std::string verb_;
  const DeviceConfig& config_;
  const CommandOptions& options_;
  std::filesystem::path out_dir_;
  json summary_;
};

json run_simulate(const DeviceConfig& config, const CommandOptions& o, Writer& w) {
  const std::string what = o.get("spectrum", "s11");
  SynthRequest req;
  req.port = parse_port(o);
  req.points = parse_count(o, "points", 2001);
  req.span_linewidths = o.number("span", 10.0);
  if (what == "s11") {
    req.model = SynthModel::Reflection;
  } else if (what == "eit") {
    req.model = SynthModel::Eit;
  } else if (what == "conversion") {
    req.model = SynthModel::Conversion;
  } else {
    fail(ErrorCategory::InvalidInput, "unknown spectrum '" + what + "' (s11, eit, conversion)");
  }
  if (const Axis* a = o.axis("freq_hz")) req.freq_hz = a->values;
  const SynthOutput s = synthesize_spectrum(config, req);
  const std::string port = std::to_string(index(req.port) + 1);
  if (req.model == SynthModel::Conversion) {
    ComplexSpectrum power = s.spectrum;
    for (auto& v : power.value) v = std::norm(v);
    w.write("simulate_conversion.csv", format_power_spectrum(power), {{"truth", s.truth}});
  } else {
    w.write("simulate_" + what + "_" + port + ".csv", format_spectrum(s.spectrum), {{"truth", s.truth}});
  }
  return {{"points", s.spectrum.size()}};
}

json run_sweep(const DeviceConfig& config, const CommandOptions& o, Writer& w) {
  const std::string kind = o.get("kind", "grid");
  if (kind == "grid") {
    const auto c1 = axis_or(o, "c1", axis_values(0.0, 100.0, 11, Spacing::Linear));
    const auto c2 = axis_or(o, "c2", axis_values(0.0, 100.0, 11, Spacing::Linear));
    const auto rows = run_cooperativity_grid(config, c1, c2);
    w.write("sweep_grid.csv", format_table(grid_table(rows)));
    return {{"rows", rows.size()}};
  }
  if (kind == "power-grid") {
    const auto p1 = axis_or(o, "p1", axis_values(-14.0, 0.0, 8, Spacing::Linear));
    const auto p2 = axis_or(o, "p2", axis_values(-10.0, 2.0, 7, Spacing::Linear));
    const auto rows = run_power_grid(config, p1, p2);
    w.write("sweep_power_grid.csv", format_table(grid_table(rows)));
    return {{"rows", rows.size()}};
  }
  if (kind == "bandwidth") {
    const auto coops = axis_or(o, "coop", {5.0, 10.0, 20.0, 35.0, 60.0, 90.0, 122.0});
    const auto rows = run_bandwidth_sweep(config, coops, parse_count(o, "points", 2001), o.number("span", 10.0));
    w.write("sweep_bandwidth.csv", format_table(bandwidth_table(rows)),
            {{"relative_tolerance", kBandwidthTolerance}});
    const auto bad = std::count_if(rows.begin(), rows.end(), [](const BandwidthRow& r) { return !r.within_tolerance; });
    return {{"rows", rows.size()}, {"outside_tolerance", bad}};
  }
  if (kind == "dynamic-range") {
    const Axis* a = o.axis("flux");
    const std::vector<double> flux = a ? a->values : axis_values(1e5, 2e9, 21, Spacing::Log);
    const auto r = run_dynamic_range(config, flux);
    w.write("sweep_dynamic_range.csv", format_table(dynamic_range_table(r)),
            {{"compression_modeled", r.compression_modeled},
             {"model_transmission", r.model_transmission},
             {"band", {r.band_low, r.band_high}},
             {"cooperativity", r.coop}});
    return {{"rows", r.flux.size()}, {"band", {r.band_low, r.band_high}}};
  }
  fail(ErrorCategory::InvalidInput, "unknown sweep kind '" + kind + "' (grid, power-grid, bandwidth, dynamic-range)");
}

std::string unit_name(ParameterUnit u) {
  switch (u) {
    case ParameterUnit::AngularRate: return "rad/s";
    case ParameterUnit::Radians: return "rad";
    case ParameterUnit::Seconds: return "s";
    case ParameterUnit::Dimensionless: return "1";
    case ParameterUnit::Data: return "data";
  }
  return "";
}

json run_fit(const DeviceConfig& config, const CommandOptions& o, Writer& w) {
  FitProblem problem;
  problem.model = parse_forward_model(o.get("model", "single"));
  require(!o.data.empty(), "fit needs --data");
  const bool normalize = o.get("normalize", "0") == "1" || o.get("normalize", "") == "true";
  for (const auto& path : o.data) {
    ComplexSpectrum s = read_spectrum(path);
    if (normalize) s = normalize_reflection(s, estimate_off_resonant_amplitude(s));
    problem.data.push_back(std::move(s));
  }
  for (const auto& h : split_list(o.get("hold", ""))) problem.held.insert(h);
  for (const auto& [k, v] : o.values) {
    if (k.rfind("guess.", 0) == 0) problem.initial_guess[k.substr(6)] = parse_number(k, v);
  }
  if (problem.model == ForwardModel::TwoModeEit) {
    EitContext ctx;
    ctx.resonators = config.resonators;
    ctx.drive_omega = {config.drives[0].omega_d, config.drives[1].omega_d};
    ctx.calibrations = config.calibrations;
    ctx.mechanics_prior = config.mechanics;
    problem.eit = ctx;
  }
  const FitResult r = fit(problem);
  std::string text = "parameter,value,std_error,unit,held,at_bound\n";
  for (const auto& p : r.params) {
    text += p.name + "," + format_number(p.value) + "," + format_number(p.std_error) + "," + unit_name(p.unit) + "," +
            (p.held ? "1" : "0") + "," + (p.at_bound ? "1" : "0") + "\n";
  }
  for (const auto& [k, v] : r.derived) {
    const auto it = r.derived_std_error.find(k);
    const double se = it == r.derived_std_error.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
    text += k + "," + format_number(v) + "," + format_number(se) + ",derived,0,0\n";
  }
  json cov = json::array();
  for (Eigen::Index i = 0; i < r.covariance.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < r.covariance.cols(); ++j) row.push_back(r.covariance(i, j));
    cov.push_back(row);
  }
  const std::string name = "fit_" + std::string(forward_model_name(r.model)) + ".csv";
  w.write(name, text,
          {{"converged", r.converged},
           {"identifiable", r.identifiable},
           {"iterations", r.iterations},
           {"residual_norm", r.residual_norm},
           {"gradient_norm", r.gradient_norm},
           {"covariance", cov},
           {"message", r.message}});
  json params = json::object();
  for (const auto& p : r.params) params[p.name] = p.value;
  return {{"converged", r.converged}, {"identifiable", r.identifiable}, {"params", params}, {"message", r.message}};
}

json run_cool(const DeviceConfig& config, const CommandOptions& o, Writer& w) {
  const std::string res = o.get("resonator", "1");
  require(res == "1" || res == "2", "resonator must be 1 or 2");
  const auto powers = axis_or(o, "power", axis_values(-30.0, 10.0, 41, Spacing::Linear));
  const auto rows = run_cooling(config, res == "1" ? 0 : 1, powers);
  w.write("cool_" + res + ".csv", format_table(cooling_table(rows)));
  return {{"rows", rows.size()}};
}

json run_noise(const DeviceConfig& config, const CommandOptions& o, Writer& w) {
  const auto p1 = axis_or(o, "p1", {config.drives[0].p_applied});
  const auto p2 = axis_or(o, "p2", {config.drives[1].p_applied});
  std::vector<std::array<double, 2>> pairs;
  for (double a : p1) {
    for (double b : p2) pairs.push_back({a, b});
  }
  const auto rows = run_noise_budget(config, pairs);
  w.write("noise.csv", format_table(noise_table(rows)), {{"coop_threshold", config.noise_coop_threshold}});
  const auto in = std::count_if(rows.begin(), rows.end(), [](const NoiseRow& r) { return r.in_regime; });
  return {{"rows", rows.size()}, {"in_regime", in}};
}

json run_synth(const DeviceConfig& config, const CommandOptions& o, Writer& w) {
  SynthRequest req;
  req.model = parse_synth_model(o.get("model", "reflection"));
  req.port = parse_port(o);
  req.points = parse_count(o, "points", 2001);
  req.span_linewidths = o.number("span", 10.0);
  req.noise.sigma = o.number("sigma", 0.0);
  req.noise.seed = o.seed;
  req.raw = o.get("raw", "0") == "1" || o.get("raw", "") == "true";
  if (const Axis* a = o.axis("freq_hz")) req.freq_hz = a->values;
  const SynthOutput s = synthesize_spectrum(config, req);
  const std::string stem =
      "synth_" + std::string(synth_model_name(req.model)) + "_" + std::to_string(index(req.port) + 1);
  std::string text;
  if (req.model == SynthModel::Heating) {
    Table t{{"n_drive", "n_res"}, {}};
    for (std::size_t k = 0; k < s.spectrum.size(); ++k) t.rows.push_back({s.spectrum.freq_hz[k], s.spectrum.value[k].real()});
    text = format_table(t);
  } else {
    text = format_spectrum(s.spectrum);
  }
  w.write(stem + ".csv", text);
  w.write_json(stem + ".truth.json", s.truth);
  return {{"points", s.spectrum.size()}};
}

}  // namespace

std::string CommandOptions::get(std::string_view key, std::string_view fallback) const {
  const auto it = values.find(std::string(key));
  return it == values.end() ? std::string(fallback) : it->second;
}

double CommandOptions::number(std::string_view key, double fallback) const {
  const auto it = values.find(std::string(key));
  return it == values.end() ? fallback : parse_number(key, it->second);
}

const Axis* CommandOptions::axis(std::string_view name) const {
  for (const auto& a : axes) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

std::vector<std::string> command_names() { return {"simulate", "sweep", "fit", "cool", "noise", "synth"}; }

json run_command(std::string_view verb, const DeviceConfig& config, const CommandOptions& options,
                 const std::filesystem::path& out_dir) {
  require(options.format == "csv", "only --format csv is supported");
  for (const auto& a : options.axes) {
    require(!a.name.empty(), "axis needs a name");
    for (double v : a.values) require(std::isfinite(v), "axis '" + a.name + "' has a non-finite value");
  }
  config.validate();
  Writer w(verb, config, options, out_dir);
  json detail;
  if (verb == "simulate") {
    detail = run_simulate(config, options, w);
  } else if (verb == "sweep") {
    detail = run_sweep(config, options, w);
  } else if (verb == "fit") {
    detail = run_fit(config, options, w);
  } else if (verb == "cool") {
    detail = run_cool(config, options, w);
  } else if (verb == "noise") {
    detail = run_noise(config, options, w);
  } else if (verb == "synth") {
    detail = run_synth(config, options, w);
  } else {
    fail(ErrorCategory::InvalidInput, "unknown command '" + std::string(verb) + "'");
  }
  json summary = w.summary();
  for (const auto& [k, v] : detail.items()) summary[k] = v;
  return summary;
}

}  // namespace emconv::harness

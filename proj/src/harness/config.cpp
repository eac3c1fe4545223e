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

#include "emconv/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "emconv/error.hpp"
#include "emconv/units.hpp"

namespace emconv::harness {

namespace {

struct Field {
  std::function<void(DeviceConfig&, double)> set;
  std::function<double(const DeviceConfig&)> get;
};

HeatingModel& heating_of(DeviceConfig& c, std::size_t i) {
  if (!c.heating[i]) c.heating[i] = HeatingModel{0.0, 0.0, 1.0};
  return *c.heating[i];
}

double heating_value(const DeviceConfig& c, std::size_t i, double HeatingModel::*field) {
  return c.heating[i] ? (*c.heating[i]).*field : std::numeric_limits<double>::quiet_NaN();
}

const std::map<std::string, Field, std::less<>>& fields() {
  static const std::map<std::string, Field, std::less<>> table = [] {
    std::map<std::string, Field, std::less<>> t;
    for (std::size_t i = 0; i < 2; ++i) {
      const std::string n = std::to_string(i + 1);
      const std::string res = "resonator" + n + ".";
      t[res + "frequency_hz"] = {[i](DeviceConfig& c, double v) { c.resonators[i].omega = hz_to_angular(v); },
                                 [i](const DeviceConfig& c) { return angular_to_hz(c.resonators[i].omega); }};
      t[res + "kappa_in_hz"] = {[i](DeviceConfig& c, double v) { c.resonators[i].kappa_in = hz_to_angular(v); },
                                [i](const DeviceConfig& c) { return angular_to_hz(c.resonators[i].kappa_in); }};
      t[res + "kappa_ex_hz"] = {[i](DeviceConfig& c, double v) { c.resonators[i].kappa_ex = hz_to_angular(v); },
                                [i](const DeviceConfig& c) { return angular_to_hz(c.resonators[i].kappa_ex); }};
      // q_in needs the frequency first; eta needs kappa_in first
      t[res + "q_in"] = {[i](DeviceConfig& c, double v) { c.resonators[i].kappa_in = c.resonators[i].omega / v; },
                         [i](const DeviceConfig& c) { return c.resonators[i].omega / c.resonators[i].kappa_in; }};
      t[res + "eta"] = {[i](DeviceConfig& c, double v) {
                          require(v > 0.0 && v < 1.0, "eta given with kappa_in must lie in (0, 1)");
                          c.resonators[i].kappa_ex = v / (1.0 - v) * c.resonators[i].kappa_in;
                        },
                        [i](const DeviceConfig& c) { return c.resonators[i].eta(); }};

      const std::string drv = "drive" + n + ".";
      t[drv + "power_dbm"] = {[i](DeviceConfig& c, double v) { c.drives[i].p_applied = v; },
                              [i](const DeviceConfig& c) { return c.drives[i].p_applied; }};
      t[drv + "attenuation_db"] = {[i](DeviceConfig& c, double v) { c.drives[i].attenuation = v; },
                                   [i](const DeviceConfig& c) { return c.drives[i].attenuation; }};
      t[drv + "g0_hz"] = {[i](DeviceConfig& c, double v) { c.drives[i].g0 = hz_to_angular(v); },
                          [i](const DeviceConfig& c) { return angular_to_hz(c.drives[i].g0); }};
      t[drv + "frequency_hz"] = {[i](DeviceConfig& c, double v) {
                                   c.drives[i].omega_d = hz_to_angular(v);
                                   c.red_sideband[i] = false;
                                 },
                                 [i](const DeviceConfig& c) { return angular_to_hz(c.drives[i].omega_d); }};

      const std::string cal = "calibration" + n + ".";
      t[cal + "phase_rad"] = {[i](DeviceConfig& c, double v) { c.calibrations[i].phase_offset = v; },
                              [i](const DeviceConfig& c) { return c.calibrations[i].phase_offset; }};
      t[cal + "delay_s"] = {[i](DeviceConfig& c, double v) { c.calibrations[i].delay = v; },
                            [i](const DeviceConfig& c) { return c.calibrations[i].delay; }};

      t["output" + n + ".gain_db"] = {[i](DeviceConfig& c, double v) { c.output_gain_db[i] = v; },
                                      [i](const DeviceConfig& c) { return c.output_gain_db[i]; }};

      const std::string heat = "heating" + n + ".";
      t[heat + "amplitude"] = {[i](DeviceConfig& c, double v) { heating_of(c, i).amplitude = v; },
                               [i](const DeviceConfig& c) { return heating_value(c, i, &HeatingModel::amplitude); }};
      t[heat + "exponent"] = {[i](DeviceConfig& c, double v) { heating_of(c, i).exponent = v; },
                              [i](const DeviceConfig& c) { return heating_value(c, i, &HeatingModel::exponent); }};
      t[heat + "reference_n"] = {[i](DeviceConfig& c, double v) { heating_of(c, i).reference_n = v; },
                                 [i](const DeviceConfig& c) { return heating_value(c, i, &HeatingModel::reference_n); }};
    }
    t["mechanics.frequency_hz"] = {[](DeviceConfig& c, double v) { c.mechanics.omega_m = hz_to_angular(v); },
                                   [](const DeviceConfig& c) { return angular_to_hz(c.mechanics.omega_m); }};
    t["mechanics.gamma_hz"] = {[](DeviceConfig& c, double v) { c.mechanics.gamma_m = hz_to_angular(v); },
                               [](const DeviceConfig& c) { return angular_to_hz(c.mechanics.gamma_m); }};
    t["mechanics.n_bath"] = {[](DeviceConfig& c, double v) { c.mechanics.n_bath = v; },
                             [](const DeviceConfig& c) { return c.mechanics.n_bath; }};
    t["mechanics.temperature_k"] = {
        [](DeviceConfig& c, double v) { c.mechanics.n_bath = thermal_occupancy(c.mechanics.omega_m, v); },
        [](const DeviceConfig& c) { return occupancy_temperature(c.mechanics.omega_m, c.mechanics.n_bath); }};
    t["analysis.noise_coop_threshold"] = {[](DeviceConfig& c, double v) { c.noise_coop_threshold = v; },
                                          [](const DeviceConfig& c) { return c.noise_coop_threshold; }};
    t["analysis.transmission_span_linewidths"] = {
        [](DeviceConfig& c, double v) { c.transmission_span_linewidths = v; },
        [](const DeviceConfig& c) { return c.transmission_span_linewidths; }};
    return t;
  }();
  return table;
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(ErrorCategory::Config, "value for '" + key + "' is not a number: '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) {
    fail(ErrorCategory::Config, "trailing characters in value for '" + key + "': '" + text + "'");
  }
  return v;
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr const char* kPresetDevice = R"(# two-resonator silicon nitride nanobeam converter
[resonator1]
frequency_hz = 7.444e9
q_in = 2.2e5
eta = 0.92

[resonator2]
frequency_hz = 9.308e9
q_in = 5.5e4
eta = 0.68

[mechanics]
frequency_hz = 4.118e6
gamma_hz = 7
n_bath = 60

[drive1]
power_dbm = -6
attenuation_db = 69.0
g0_hz = 33

[drive2]
power_dbm = -6
attenuation_db = 70.4
g0_hz = 44

[calibration1]
phase_rad = 0
delay_s = 50e-9

[calibration2]
phase_rad = 0
delay_s = 50e-9

[heating1]
amplitude = 4
exponent = 0.5
reference_n = 3.0e4

[heating2]
amplitude = 4
exponent = 0.5
reference_n = 1.6e4
)";

}  // namespace

void DeviceConfig::set(std::string_view key, double value) {
  const auto it = fields().find(key);
  if (it == fields().end()) {
    fail(ErrorCategory::Config, "unknown config key '" + std::string(key) + "'");
  }
  if (std::isnan(value)) {
    fail(ErrorCategory::Config, "value for '" + std::string(key) + "' is NaN");
  }
  try {
    it->second.set(*this, value);
  } catch (const Error& e) {
    fail(ErrorCategory::Config, e.what());
  }
}

double DeviceConfig::get(std::string_view key) const {
  const auto it = fields().find(key);
  if (it == fields().end()) {
    fail(ErrorCategory::Config, "unknown config key '" + std::string(key) + "'");
  }
  return it->second.get(*this);
}

std::vector<std::string> DeviceConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [k, v] : fields()) out.push_back(k);
  return out;
}

void DeviceConfig::resolve() {
  for (std::size_t i = 0; i < 2; ++i) {
    if (red_sideband[i]) drives[i].omega_d = red_sideband_frequency(resonators[i], mechanics);
  }
  validate();
}

void DeviceConfig::validate() const {
  try {
    for (std::size_t i = 0; i < 2; ++i) {
      resonators[i].validate();
      drives[i].validate();
      calibrations[i].validate();
      if (heating[i]) heating[i]->validate();
      require(std::isfinite(output_gain_db[i]), "output gain must be finite");
    }
    mechanics.validate();
    require(noise_coop_threshold >= 0.0, "noise_coop_threshold must be >= 0");
    require(transmission_span_linewidths > 0.0, "transmission_span_linewidths must be > 0");
  } catch (const Error& e) {
    fail(ErrorCategory::Config, std::string("invalid device config: ") + e.what());
  }
}

void DeviceConfig::match_cooperativity(double c1, double c2) {
  resolve();
  const std::array<double, 2> target{c1, c2};
  for (std::size_t i = 0; i < 2; ++i) {
    drives[i].p_applied = drive_power_for_cooperativity(target[i], drives[i], resonators[i], mechanics);
  }
}

std::string DeviceConfig::format() const {
  std::ostringstream os;
  os << "# " << name << "\n";
  std::string section;
  for (const auto& key : keys()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);
    // derived aliases are not written
    if (field == "q_in" || field == "eta" || field == "temperature_k") continue;
    if (sec.starts_with("drive") && field == "frequency_hz" && red_sideband[sec.back() - '1']) continue;
    if (sec.starts_with("heating") && !heating[static_cast<std::size_t>(sec.back() - '1')]) continue;
    if (sec != section) {
      os << (section.empty() ? "" : "\n") << "[" << sec << "]\n";
      section = sec;
    }
    os << field << " = " << number(get(key)) << "\n";
  }
  return os.str();
}

DeviceConfig parse_config(std::string_view text) {
  boost::property_tree::ptree tree;
  std::istringstream is{std::string(text)};
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCategory::Config, std::string("malformed config: ") + e.what());
  }
  DeviceConfig config;
  // a leading "# name" line names the device
  if (text.starts_with("# ")) {
    const std::string_view first = text.substr(2, text.find('\n') - 2);
    if (!first.empty()) config.name = std::string(first);
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      fail(ErrorCategory::Config, "key '" + section + "' outside of any section");
    }
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      config.set(full, parse_number(full, value.data()));
    }
  }
  config.resolve();
  return config;
}

DeviceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCategory::Io, "cannot open config file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  DeviceConfig config = parse_config(buf.str());
  if (config.name == "custom") config.name = path.filename().string();
  return config;
}

DeviceConfig preset(std::string_view name) {
  if (name == "fink2018") {
    DeviceConfig config = parse_config(kPresetDevice);
    config.name = "fink2018";
    return config;
  }
  fail(ErrorCategory::Config, "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"fink2018"}; }

}  // namespace emconv::harness

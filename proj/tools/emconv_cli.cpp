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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "emconv/emconv.h"

namespace {

int report(emconv_status status) {
  const nlohmann::json err = {
      {"error", {{"category", emconv_status_name(status)}, {"code", static_cast<int>(status)},
                 {"message", emconv_last_error()}}}};
  std::cerr << err.dump() << "\n";
  return static_cast<int>(status);
}

int usage_error(const std::string& message) {
  const nlohmann::json err = {
      {"error", {{"category", "invalid_argument"}, {"code", EMCONV_INVALID_ARGUMENT}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
  return EMCONV_INVALID_ARGUMENT;
}

bool split_pair(const std::string& s, std::string& key, std::string& value) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  key = s.substr(0, eq);
  value = s.substr(eq + 1);
  return true;
}

struct Common {
  std::string config;
  std::string preset;
  std::string out;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::vector<std::string> sets;
  std::vector<std::string> axes;
  std::vector<std::string> data;
  std::vector<std::string> opts;
};

void add_common(CLI::App* cmd, Common& c) {
  auto* cfg = cmd->add_option("--config", c.config, "Device config file (INI)");
  cmd->add_option("--preset", c.preset, "Named device preset (fink2018)")->excludes(cfg);
  cmd->add_option("--out", c.out, "Output directory (default: $EMCONV_OUT_DIR or .)");
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv"}));
  cmd->add_option("--set", c.sets, "Override a config value, section.key=value");
  cmd->add_option("--axis", c.axes, "Sweep axis, name=start:stop:count[:linear|log|db] or name=v1,v2");
  cmd->add_option("--data", c.data, "Input data file");
  cmd->add_option("--opt", c.opts, "Extra command option, key=value");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electro-mechanical frequency converter model, fitters and experiment harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", emconv_version());

  Common common;
  std::map<std::string, std::string> flags;
  const auto flag = [&](CLI::App* cmd, const std::string& name, const std::string& help) {
    cmd->add_option("--" + name, flags[name], help);
  };

  auto* simulate = app.add_subcommand("simulate", "Model spectra (s11, eit, conversion)");
  flag(simulate, "spectrum", "s11, eit or conversion");
  flag(simulate, "port", "Resonator port, 1 or 2");
  flag(simulate, "points", "Number of frequency points");
  flag(simulate, "span", "Span in linewidths");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps");
  flag(sweep, "kind", "grid, power-grid, bandwidth or dynamic-range");
  flag(sweep, "points", "Spectrum points per bandwidth fit");
  flag(sweep, "span", "Bandwidth spectrum span in linewidths");

  auto* fit = app.add_subcommand("fit", "Fit measured or synthetic data");
  flag(fit, "model", "single, eit, lorentzian or power-law");
  flag(fit, "hold", "Comma-separated parameters held at their initial values");
  flag(fit, "normalize", "1 to normalize reflections by the off-resonant level");
  std::vector<std::string> guesses;
  fit->add_option("--guess", guesses, "Initial value, name=value");

  auto* cool = app.add_subcommand("cool", "Mechanical occupancy versus single-tone drive power");
  flag(cool, "resonator", "Driven resonator, 1 or 2");

  auto* noise = app.add_subcommand("noise", "Added-noise budget versus drive powers");

  auto* synth = app.add_subcommand("synth", "Synthetic test data with truth sidecar");
  flag(synth, "model", "reflection, eit, conversion or heating");
  flag(synth, "port", "Resonator port, 1 or 2");
  flag(synth, "points", "Number of points");
  flag(synth, "span", "Span in linewidths");
  flag(synth, "sigma", "Per-quadrature noise standard deviation");
  flag(synth, "raw", "1 to apply the line attenuation and gain");

  for (auto* cmd : {simulate, sweep, fit, cool, noise, synth}) add_common(cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }
  const std::string verb = app.get_subcommands().front()->get_name();

  emconv_device* dev = nullptr;
  emconv_status st = EMCONV_OK;
  if (!common.config.empty()) {
    st = emconv_device_load(common.config.c_str(), &dev);
  } else {
    st = emconv_device_preset(common.preset.empty() ? "fink2018" : common.preset.c_str(), &dev);
  }
  if (st != EMCONV_OK) return report(st);

  emconv_options* opts = nullptr;
  const auto cleanup = [&](int code) {
    emconv_options_free(opts);
    emconv_device_free(dev);
    return code;
  };
  if ((st = emconv_options_create(&opts)) != EMCONV_OK) return cleanup(report(st));

  for (const auto& s : common.sets) {
    std::string key, value;
    if (!split_pair(s, key, value)) return cleanup(usage_error("--set expects key=value, got '" + s + "'"));
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') return cleanup(usage_error("--set value is not a number: '" + value + "'"));
    if ((st = emconv_device_set(dev, key.c_str(), v)) != EMCONV_OK) return cleanup(report(st));
  }
  for (const auto& a : common.axes) {
    if ((st = emconv_options_add_axis(opts, a.c_str())) != EMCONV_OK) return cleanup(report(st));
  }
  for (const auto& d : common.data) {
    if ((st = emconv_options_add_data(opts, d.c_str())) != EMCONV_OK) return cleanup(report(st));
  }
  for (const auto& [k, v] : flags) {
    if (v.empty()) continue;
    if ((st = emconv_options_set(opts, k.c_str(), v.c_str())) != EMCONV_OK) return cleanup(report(st));
  }
  for (const auto& g : guesses) {
    std::string key, value;
    if (!split_pair(g, key, value)) return cleanup(usage_error("--guess expects name=value, got '" + g + "'"));
    if ((st = emconv_options_set(opts, ("guess." + key).c_str(), value.c_str())) != EMCONV_OK) {
      return cleanup(report(st));
    }
  }
  for (const auto& o : common.opts) {
    std::string key, value;
    if (!split_pair(o, key, value)) return cleanup(usage_error("--opt expects key=value, got '" + o + "'"));
    if ((st = emconv_options_set(opts, key.c_str(), value.c_str())) != EMCONV_OK) return cleanup(report(st));
  }
  emconv_options_set_seed(opts, common.seed);
  emconv_options_set(opts, "format", common.format.c_str());

  std::string out_dir = common.out;
  if (out_dir.empty()) {
    const char* env = std::getenv("EMCONV_OUT_DIR");
    out_dir = (env && *env) ? env : ".";
  }

  char* summary = nullptr;
  st = emconv_run(dev, verb.c_str(), opts, out_dir.c_str(), &summary);
  if (st != EMCONV_OK) return cleanup(report(st));
  std::cout << summary << "\n";
  emconv_string_free(summary);
  return cleanup(0);
}

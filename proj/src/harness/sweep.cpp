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

#include "emconv/harness/sweep.hpp"

#include <cmath>

#include "emconv/error.hpp"

namespace emconv::harness {

namespace {

double to_number(std::string_view s, std::string_view what) {
  const std::string text(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    fail(ErrorCategory::InvalidInput, "bad number '" + text + "' in " + std::string(what));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::vector<double> axis_values(double start, double stop, std::size_t count, Spacing spacing) {
  require(count >= 1, "axis needs at least one point");
  require(std::isfinite(start) && std::isfinite(stop), "axis range must be finite");
  if (spacing == Spacing::Log) {
    require(start > 0.0 && stop > 0.0, "log axis needs a positive range");
  }
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    switch (spacing) {
      case Spacing::Linear:
        out[k] = start + (stop - start) * t;
        break;
      case Spacing::Log:
        out[k] = std::exp(std::log(start) + (std::log(stop) - std::log(start)) * t);
        break;
      case Spacing::Decibel:
        out[k] = std::pow(10.0, (start + (stop - start) * t) / 10.0);
        break;
    }
  }
  // pin the endpoints against rounding
  if (spacing == Spacing::Log || spacing == Spacing::Linear) {
    out.front() = start;
    if (count > 1) out.back() = stop;
  }
  return out;
}

Axis parse_axis(std::string_view spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    fail(ErrorCategory::InvalidInput, "axis '" + std::string(spec) + "' is not of the form name=range");
  }
  Axis axis;
  axis.name = std::string(spec.substr(0, eq));
  const std::string_view body = spec.substr(eq + 1);
  if (body.find(':') == std::string_view::npos) {
    for (auto item : split(body, ',')) {
      if (!item.empty()) axis.values.push_back(to_number(item, "axis " + axis.name));
    }
    require(!axis.values.empty(), "axis " + axis.name + " has no values");
    for (double v : axis.values) require(std::isfinite(v), "axis " + axis.name + " has a non-finite value");
    return axis;
  }
  const auto parts = split(body, ':');
  require(parts.size() == 3 || parts.size() == 4, "axis " + axis.name + " needs start:stop:count[:spacing]");
  const double start = to_number(parts[0], "axis " + axis.name);
  const double stop = to_number(parts[1], "axis " + axis.name);
  const double count = to_number(parts[2], "axis " + axis.name);
  require(count >= 1.0 && count == std::floor(count) && count < 1e7, "axis " + axis.name + " count must be a positive integer");
  Spacing spacing = Spacing::Linear;
  if (parts.size() == 4) {
    if (parts[3] == "linear") spacing = Spacing::Linear;
    else if (parts[3] == "log") spacing = Spacing::Log;
    else if (parts[3] == "db") spacing = Spacing::Decibel;
    else fail(ErrorCategory::InvalidInput, "unknown axis spacing '" + std::string(parts[3]) + "'");
  }
  axis.values = axis_values(start, stop, static_cast<std::size_t>(count), spacing);
  return axis;
}

const Axis* SweepSpec::find(std::string_view name) const {
  for (const auto& a : axes) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

void SweepSpec::validate() const {
  require(!axes.empty(), "sweep needs at least one axis");
  for (const auto& a : axes) {
    require(!a.values.empty(), "axis " + a.name + " is empty");
    for (double v : a.values) require(std::isfinite(v), "axis " + a.name + " has a non-finite value");
  }
}

void NoiseSpec::validate() const {
  require(std::isfinite(sigma) && sigma >= 0.0, "noise sigma must be >= 0");
}

}  // namespace emconv::harness

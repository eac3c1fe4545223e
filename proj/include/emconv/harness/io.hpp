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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "emconv/scattering.hpp"

namespace emconv::harness {

inline constexpr const char* kToolName = "emconv";
inline constexpr const char* kToolVersion = "0.1.0";

/// Row-major numeric table with a self-describing header.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// %.17g, the shortest form that round-trips every double; "nan"/"inf" kept.
std::string format_number(double v);

/// CSV with header `freq_hz,re,im`, LF line endings.
std::string format_spectrum(const ComplexSpectrum& spectrum);
/// Header `detuning_hz,power`; real parts of `value` are written.
std::string format_power_spectrum(const ComplexSpectrum& spectrum);
std::string format_table(const Table& table);

/// Reads any of the numeric CSV formats written here. `freq_hz,re,im` gives a
/// complex spectrum; two-column files (`detuning_hz,power`, `n_drive,occupancy`)
/// come back with the second column in the real part.
ComplexSpectrum read_spectrum(const std::filesystem::path& path);

/// Writes `text` to `path` byte for byte, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

/// Provenance sidecar next to a result file: `<stem>.meta.json`.
void write_metadata(const std::filesystem::path& data_file, const nlohmann::json& meta);

}  // namespace emconv::harness

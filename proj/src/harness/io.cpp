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

#include "emconv/harness/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "emconv/error.hpp"

namespace emconv::harness {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_spectrum(const ComplexSpectrum& spectrum) {
  std::string out = "freq_hz,re,im\n";
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    out += format_number(spectrum.freq_hz[k]) + "," + format_number(spectrum.value[k].real()) + "," +
           format_number(spectrum.value[k].imag()) + "\n";
  }
  return out;
}

std::string format_power_spectrum(const ComplexSpectrum& spectrum) {
  std::string out = "detuning_hz,power\n";
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    out += format_number(spectrum.freq_hz[k]) + "," + format_number(spectrum.value[k].real()) + "\n";
  }
  return out;
}

std::string format_table(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out += (c ? "," : "") + table.columns[c];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += (c ? "," : "") + format_number(row[c]);
    }
    out += "\n";
  }
  return out;
}

ComplexSpectrum read_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCategory::Io, "cannot open data file " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    fail(ErrorCategory::Io, "data file is empty: " + path.string());
  }
  const std::vector<std::string> header = split(line, ',');
  const bool complex_data = header.size() == 3 && header[0] == "freq_hz" && header[1] == "re" && header[2] == "im";
  const bool real_data = header.size() == 2;
  if (!complex_data && !real_data) {
    fail(ErrorCategory::Io, "unrecognized header in " + path.string() + ": '" + line + "'");
  }
  ComplexSpectrum out;
  out.label = real_data ? header[1] : "S";
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != header.size()) {
      fail(ErrorCategory::Io, path.string() + ":" + std::to_string(lineno) + ": wrong number of columns");
    }
    std::vector<double> v;
    for (const auto& c : cells) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        fail(ErrorCategory::Io, path.string() + ":" + std::to_string(lineno) + ": bad number '" + c + "'");
      }
    }
    out.freq_hz.push_back(v[0]);
    out.value.emplace_back(v[1], complex_data ? v[2] : 0.0);
  }
  try {
    out.validate();
  } catch (const Error& e) {
    fail(ErrorCategory::Io, path.string() + ": " + e.what());
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(ErrorCategory::Io, "cannot write " + path.string());
  }
  out << text;
  if (!out) {
    fail(ErrorCategory::Io, "write failed for " + path.string());
  }
}

void write_metadata(const std::filesystem::path& data_file, const nlohmann::json& meta) {
  std::filesystem::path side = data_file;
  side.replace_extension(".meta.json");
  write_text(side, meta.dump(2) + "\n");
}

}  // namespace emconv::harness

// Copyright 2026 The qstat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qstat/config.hpp"

namespace qstat {

inline constexpr const char* kToolVersion = "1.0.0";

enum class SweepMethod { Analytic, Numerical, Both };
std::string_view to_string(SweepMethod m);
SweepMethod parse_sweep_method(std::string_view text);

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepSpec {
  /// Run configuration every cell starts from (no "sweep" section).
  Json base = Json::object();
  std::vector<SweepAxis> axes;
  SweepMethod method = SweepMethod::Analytic;
  std::uint64_t seed = 0;
  int threads = 0;
};

/// Reads the "sweep" section: {"axes": [{"name": ..., "values": [...]} or
/// {"name": ..., "range": {"start", "stop", "count"}}], "method", "seed"}.
/// Axis names must be sweepable parameters.
SweepSpec parse_sweep_spec(const Json& doc);
/// Canonical form; parse_sweep_spec(to_json(s)) reproduces s.
Json to_json(const SweepSpec& s);

inline constexpr std::size_t kMaxAnalyticCells = 100'000;
inline constexpr std::size_t kMaxNumericalCells = 1'000;

struct SweepRow {
  std::vector<double> coords;
  std::vector<double> values;  ///< NaN where the cell failed
  std::string error;
};

struct Dataset {
  std::vector<std::string> columns;  ///< axis names, then metrics
  std::vector<SweepRow> rows;
  std::size_t failed = 0;
  double wall_seconds = 0.0;

  double failed_fraction() const { return rows.empty() ? 0.0 : static_cast<double>(failed) / rows.size(); }
};

/// Metric columns produced for a base configuration and method.
std::vector<std::string> sweep_metrics(const Json& base, SweepMethod method);

/// Cartesian product of the axes in row-major order (last axis fastest).
/// Cells run in parallel; rows come back in grid order.
Dataset run_sweep(const SweepSpec& spec);

/// Round-trip format with 17 significant digits.
std::string format_number(double v);
std::string to_csv(const Dataset& d);
Json manifest(const SweepSpec& spec, const Dataset& d);
/// Writes <dir>/data.csv and <dir>/manifest.json.
void write_dataset(const std::string& dir, const SweepSpec& spec, const Dataset& d);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qstat

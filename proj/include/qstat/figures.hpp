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
#include <string_view>
#include <vector>

#include "qstat/sweeps.hpp"

namespace qstat {

struct FigureAssertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct FigureReport {
  std::string id;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<FigureAssertion> assertions;
  double wall_seconds = 0.0;

  bool passed() const;
  std::string csv() const;
};

struct FigureOptions {
  int threads = 0;
  /// Skip the exact propagation where a figure has both kinds of data.
  bool analytic_only = false;
};

/// fig2a, fig2b, fig3a, fig3b, fig4even, fig4odd, figS1.
const std::vector<std::string>& figure_ids();
/// Run configuration behind a figure.
Json figure_preset(std::string_view id);
FigureReport run_figure(std::string_view id, const FigureOptions& options = {});

/// Coefficient of determination of the least-squares line through (x, y).
double linear_r2(const std::vector<double>& x, const std::vector<double>& y);

/// Oracle and property battery behind `qstat verify`; every check reports
/// separately. Randomized checks draw from std::mt19937_64 seeded with `seed`.
std::vector<FigureAssertion> run_verify(std::uint64_t seed, int threads = 0);

}  // namespace qstat

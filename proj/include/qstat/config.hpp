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

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qstat/dynamics.hpp"
#include "qstat/fermi.hpp"

namespace qstat {

using Json = nlohmann::json;

/// Everything one run needs, parsed from a document with the optional
/// sections engine, coupling, system, fermi and propagator. Energies and times
/// are taken literally; the presets use Omega(0) = 1 (Delta = 1 for the
/// fermionic preset), so energies read in units of the initial gap.
struct RunConfig {
  EngineParams engine;
  CouplingSchedule schedule = ImpulseCoupling{};
  ExternalSystem system = harmonic_system(0.1 * 3.141592653589793 / 20.0, 16);
  FermiEnsemble fermi;
  PropagatorConfig propagator;
};

/// Rejects unknown fields and wrong types with ConfigError naming the field.
RunConfig parse_run_config(const Json& doc);

/// Dotted names of every scalar parameter a sweep axis may address, e.g.
/// "engine.N" or "coupling.g".
const std::vector<std::string>& sweepable_parameters();
bool is_sweepable(std::string_view name);
/// Copy of `doc` with the dotted parameter set to `value`.
Json with_parameter(const Json& doc, std::string_view name, double value);

Json load_json_file(const std::string& path);

Json to_json(const WorkRecord& r);
Json to_json(const CycleDiagnostics& d);
Json to_json(const CycleResult& r);

}  // namespace qstat

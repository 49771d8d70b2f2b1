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

#include <cstddef>
#include <vector>

#include "qstat/analytics.hpp"
#include "qstat/dynamics.hpp"

namespace qstat {

/// N two-level fermions in a harmonic trap. Trap level l holds n_l in {0, 1, 2}
/// atoms; the occupations are frozen at the COM temperature and only atoms
/// alone on their level can change internal state.
struct FermiEnsemble {
  int n = 1;
  double omega_trap = 1.0;
  /// May be +inf.
  double beta_com = 4.0;
  /// Trap levels kept; 0 picks enough levels for a 1e-10 tail.
  int level_count = 0;
  EngineParams engine;
  std::size_t config_cap = 1'000'000;

  void validate() const;
  int resolved_levels() const;
};

struct OccupationConfig {
  std::vector<int> occupation;
  /// omega_trap sum (l + 1/2) n_l
  double energy = 0.0;
  double weight = 0.0;
  int active = 0;
};

/// Every occupation pattern with normalized weight. A singly occupied level
/// can hold either internal state, so each pattern carries 2^active states of
/// equal COM energy. Patterns below 1e-14 of the largest weight are dropped.
std::vector<OccupationConfig> enumerate_configs(const FermiEnsemble& ens);

/// Expected number of singly occupied levels.
double fermi_f(const FermiEnsemble& ens);
/// Low-temperature law: 8 e^{-b} for even N, 1 + 8 e^{-2b} for odd N.
double fermi_f_asymptotic(int n, double beta_omega);

/// (eps_h - eps_c)(tanh(beta_c eps_c) - tanh(beta_h eps_h)) f_N with
/// eps_c = E_0 and eps_h = E_{T/2}; the ratio f_N is stored as the
/// enhancement ratio.
WorkRecord fermi_work(const FermiEnsemble& ens);

struct FermiOutcoupledResult {
  WorkRecord work;
  /// <w> of a single engine under the same protocol.
  double single_engine_work = 0.0;
  /// Configuration weight skipped because it needed too many engines.
  double weight_deficit = 0.0;
};

/// Row k - 1 holds p_i after one cycle of k distinguishable engines, for
/// k = 1..k_max. Patterns only differ in k, so one table serves every
/// beta_COM.
std::vector<std::vector<double>> active_engine_probabilities(const EngineParams& engine,
                                                             const CouplingSchedule& schedule,
                                                             const ExternalSystem& system,
                                                             const PropagatorConfig& config, int k_max,
                                                             int threads = 1);

/// Pattern-weighted average of the table rows; patterns needing more engines
/// than the table holds count towards the deficit.
FermiOutcoupledResult combine_outcoupled(const std::vector<OccupationConfig>& configs,
                                         const std::vector<std::vector<double>>& table,
                                         const ExternalSystem& system);

/// Weighted average over occupation patterns of a full cycle with the active
/// atoms as distinguishable engines.
FermiOutcoupledResult fermi_outcoupled_work(const FermiEnsemble& ens, const CouplingSchedule& schedule,
                                            const ExternalSystem& system, const PropagatorConfig& config = {},
                                            int threads = 1);

}  // namespace qstat

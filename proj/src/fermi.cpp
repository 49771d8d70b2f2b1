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


#include "qstat/fermi.hpp"

#include <algorithm>
#include <cmath>

#include "qstat/parallel.hpp"

namespace qstat {

namespace {

// Relative weight below which patterns are dropped.
constexpr double kPrune = 1e-14;
constexpr double kTail = 1e-10;

double ground_energy(int n) {
  // Two atoms per level from the bottom.
  double e = 0.0;
  for (int k = 0; k < n; ++k) e += (k / 2) + 0.5;
  return e;
}

// Cheapest way to place r atoms on levels >= l.
double fill_energy(int r, int l) {
  double e = 0.0;
  for (int k = 0; k < r; ++k) e += l + (k / 2) + 0.5;
  return e;
}

}  // namespace

void FermiEnsemble::validate() const {
  require(n >= 1, ErrorCode::InvalidArgument, "N must be positive");
  require(omega_trap > 0.0, ErrorCode::InvalidArgument, "trap frequency must be positive");
  require(beta_com > 0.0, ErrorCode::InvalidArgument, "COM inverse temperature must be positive");
  require(level_count == 0 || level_count >= n, ErrorCode::InvalidArgument, "need at least N trap levels");
  engine.validate();
}

int FermiEnsemble::resolved_levels() const {
  if (level_count > 0) return level_count;
  const double b = beta_com * omega_trap;
  // Promoting an atom by k levels costs at least k omega_trap while the
  // multiplicity gains at most 2^N.
  const double budget = std::log(1.0 / kTail) + n * std::log(2.0) + std::log(static_cast<double>(n)) + 1.0;
  const int margin = std::isinf(b) ? 1 : static_cast<int>(std::ceil(budget / b));
  return std::max(n, (n + 1) / 2 + 1 + margin);
}

std::vector<OccupationConfig> enumerate_configs(const FermiEnsemble& ens) {
  ens.validate();
  const int levels = ens.resolved_levels();
  const double b = ens.beta_com * ens.omega_trap;
  const bool zero_t = std::isinf(b);
  const double e_min = ground_energy(ens.n);
  // Boltzmann exponent budget, in units of omega_trap.
  const double budget = zero_t ? 1e-9 : (std::log(1.0 / kPrune) + ens.n * std::log(2.0)) / b;

  std::vector<OccupationConfig> out;
  std::vector<int> occ(static_cast<std::size_t>(levels), 0);
  auto visit = [&](auto&& self, int l, int remaining, double energy, int active) -> void {
    if (remaining == 0) {
      if (out.size() >= ens.config_cap) {
        fail(ErrorCode::ResourceLimit, "more than " + std::to_string(ens.config_cap) +
                                           " occupation patterns; raise beta_com or lower level_count");
      }
      OccupationConfig c;
      c.occupation = occ;
      c.energy = ens.omega_trap * energy;
      c.active = active;
      const double de = energy - e_min;
      c.weight = zero_t ? 1.0 : std::ldexp(std::exp(-b * de), active);
      out.push_back(std::move(c));
      return;
    }
    if (l == levels) return;
    if (energy + fill_energy(remaining, l) - e_min > budget) return;
    for (int k = std::min(2, remaining); k >= 0; --k) {
      occ[static_cast<std::size_t>(l)] = k;
      self(self, l + 1, remaining - k, energy + k * (l + 0.5), active + (k == 1 ? 1 : 0));
    }
    occ[static_cast<std::size_t>(l)] = 0;
  };
  visit(visit, 0, ens.n, 0.0, 0);
  require(!out.empty(), ErrorCode::NumericalFailure, "no occupation pattern survived pruning");

  double wmax = 0.0;
  for (const auto& c : out) wmax = std::max(wmax, c.weight);
  std::erase_if(out, [&](const OccupationConfig& c) { return c.weight < kPrune * wmax; });
  double total = 0.0;
  for (const auto& c : out) total += c.weight;
  double tail = 0.0;
  for (auto& c : out) {
    c.weight /= total;
    if (c.occupation.back() > 0) tail += c.weight;
  }
  if (tail > kTail) {
    fail(ErrorCode::InvalidArgument, "weight " + std::to_string(tail) + " reaches the top trap level; raise level_count");
  }
  return out;
}

double fermi_f(const FermiEnsemble& ens) {
  const auto configs = enumerate_configs(ens);
  double f = 0.0;
  for (const auto& c : configs) f += c.weight * c.active;
  return f;
}

double fermi_f_asymptotic(int n, double beta_omega) {
  return n % 2 == 0 ? 8.0 * std::exp(-beta_omega) : 1.0 + 8.0 * std::exp(-2.0 * beta_omega);
}

WorkRecord fermi_work(const FermiEnsemble& ens) {
  ens.validate();
  const EngineParams& p = ens.engine;
  const double eps_c = gap_energy(p, 0.0);
  const double eps_h = gap_energy(p, p.half_period());
  const double f = fermi_f(ens);
  WorkRecord r;
  r.statistics = Statistics::Fermi;
  r.method = WorkMethod::FermiClosedForm;
  r.avg_work = (eps_h - eps_c) * (std::tanh(p.beta_c * eps_c) - std::tanh(p.beta_h * eps_h)) * f;
  r.enhancement_ratio = f;
  return r;
}

std::vector<std::vector<double>> active_engine_probabilities(const EngineParams& engine,
                                                             const CouplingSchedule& schedule,
                                                             const ExternalSystem& system,
                                                             const PropagatorConfig& config, int k_max,
                                                             int threads) {
  require(k_max >= 1, ErrorCode::InvalidArgument, "need at least one active engine");
  std::vector<std::vector<double>> table(static_cast<std::size_t>(k_max));
  parallel_for(table.size(), resolve_threads(threads), [&](std::size_t i) {
    EngineParams p = engine;
    p.n = static_cast<int>(i) + 1;
    p.statistics = Statistics::Distinguishable;
    table[i] = run_cycle(p, schedule, system, Statistics::Distinguishable, config).work.p_excite;
  });
  return table;
}

FermiOutcoupledResult combine_outcoupled(const std::vector<OccupationConfig>& configs,
                                         const std::vector<std::vector<double>>& table,
                                         const ExternalSystem& system) {
  require(!table.empty(), ErrorCode::InvalidArgument, "empty single-engine table");
  const auto ds = static_cast<std::size_t>(system.dim());
  std::vector<double> p(ds, 0.0);
  FermiOutcoupledResult out;
  for (const auto& c : configs) {
    if (c.active == 0) {
      p[0] += c.weight;
    } else if (static_cast<std::size_t>(c.active) > table.size()) {
      out.weight_deficit += c.weight;
    } else {
      const auto& row = table[static_cast<std::size_t>(c.active - 1)];
      for (std::size_t i = 0; i < ds; ++i) p[i] += c.weight * row[i];
    }
  }
  if (out.weight_deficit > 1e-3) {
    fail(ErrorCode::ResourceLimit, "occupation patterns with more than " + std::to_string(table.size()) +
                                       " active atoms carry weight " + std::to_string(out.weight_deficit));
  }
  for (std::size_t i = 1; i < ds; ++i) out.single_engine_work += system.energies[i] * table[0][i];
  out.work = make_work_record(system.energies, std::move(p), Statistics::Fermi, WorkMethod::ExactNumerical);
  if (out.single_engine_work != 0.0) out.work.enhancement_ratio = out.work.avg_work / out.single_engine_work;
  return out;
}

FermiOutcoupledResult fermi_outcoupled_work(const FermiEnsemble& ens, const CouplingSchedule& schedule,
                                            const ExternalSystem& system, const PropagatorConfig& config,
                                            int threads) {
  const auto configs = enumerate_configs(ens);
  int k_max = 1;
  for (const auto& c : configs) k_max = std::max(k_max, c.active);
  k_max = std::min(k_max, config.product_cap);
  return combine_outcoupled(configs, active_engine_probabilities(ens.engine, schedule, system, config, k_max, threads),
                            system);
}

}  // namespace qstat

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

#include <functional>
#include <vector>

#include "qstat/analytics.hpp"
#include "qstat/hilbert.hpp"

namespace qstat {

enum class Stepper {
  /// exp(-i H0 dt/2) exp(-i g dt V_R x V_S) exp(-i H0 dt/2) at the midpoint;
  /// works on every space size.
  Strang,
  /// exp(-i H(t + dt/2) dt) on the dense composite space.
  ExponentialMidpoint,
  /// exp(-i dt [H(t) + H(t + dt)]/2) on the dense composite space.
  Magnus2,
};

/// How distinguishable engines are represented.
enum class ProductMethod {
  /// Spin-j irreducible blocks with their multiplicities (exact, small).
  SpinSectors,
  /// The literal 2^N tensor-product space.
  Kronecker,
};

std::string_view to_string(Stepper s);
Stepper parse_stepper(std::string_view text);

struct TraceSample {
  double t;
  double trace;
  double leakage;
  double system_energy;
};

struct PropagatorConfig {
  Stepper stepper = Stepper::Strang;
  /// Time step; 0 picks the largest step the rule allows.
  double dt = 0.0;
  double unitarity_tol = 1e-10;
  double leakage_tol = 1e-6;
  /// Oscillator truncation used by front ends that build the system.
  Index truncation_dim = 16;
  bool enforce_step_rule = true;
  ProductMethod product_method = ProductMethod::SpinSectors;
  int product_cap = 8;
  /// Ensemble members below this weight are dropped.
  double prune_weight = 1e-16;
  /// Largest composite dimension for the dense steppers.
  Index dense_cap = 1024;
  std::function<void(const TraceSample&)> trace;
  std::size_t trace_stride = 200;
};

/// dt <= min(0.01/(N E_max), 0.01/eps_1), tightened to 0.25/alpha for
/// plateau couplings so the switching fronts are resolved.
double step_rule(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system);

struct CycleDiagnostics {
  /// Largest per-stroke deviation of the propagated ensemble Gram matrix from
  /// the identity, together with the engine-only propagator error.
  double unitarity_drift = 0.0;
  std::vector<double> stroke_drift;
  /// Largest population found in the top two system levels.
  double leakage = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t max_members = 0;
};

struct CycleResult {
  WorkRecord work;
  /// Reduced state of the external system at t = T (energy basis).
  QuantumState final_state;
  /// <H_S> at t = 0, T/2 and T.
  std::vector<double> per_stroke_energies;
  CycleDiagnostics diagnostics;
};

/// Full Otto cycle with the external system measured at 0 and T.
CycleResult run_cycle(const EngineParams& params, const CouplingSchedule& schedule, const ExternalSystem& system,
                      Statistics statistics, const PropagatorConfig& config = {});

/// rho -> U rho U^dagger with U = exp(-i g V_R x V_S) on the composite space.
QuantumState apply_impulse(const QuantumState& state, double g, const DenseOperator& v_r, const DenseOperator& v_s);

/// rho -> Gibbs(beta, H_E) x Tr_E rho.
QuantumState thermal_reset(const QuantumState& state, const DenseOperator& h_e, double beta);

/// Max over both strokes, all m and all grid times of 1 - |<m,theta_t|psi_m(t)>|^2
/// for the engine alone started in |m, theta_t0>. Uses the Dicke sector.
double adiabaticity_witness(const EngineParams& params, const PropagatorConfig& config = {});

}  // namespace qstat

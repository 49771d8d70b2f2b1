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
#include <variant>
#include <vector>

#include "qstat/errors.hpp"
#include "qstat/types.hpp"

namespace qstat {

enum class Statistics { Bose, Distinguishable, Fermi };
enum class GapDirection { Increasing, Decreasing };

std::string_view to_string(Statistics s);
std::string_view to_string(GapDirection d);
Statistics parse_statistics(std::string_view text);
GapDirection parse_gap_direction(std::string_view text);

/// Otto-cycle engine ensemble. The drive is Omega(t), swept linearly with
/// speed |v| away from Omega0 during compression (0 < t < T/2) and back during
/// expansion (T/2 < t < T). Only |v| enters; `gap_direction` fixes whether the
/// compression stroke widens (default) or narrows the gap.
struct EngineParams {
  int n = 1;
  double omega0 = 1.0;
  double delta = 0.0;
  double v = -0.1;
  double period = 20.0;
  double beta_c = 2.0;
  double beta_h = 0.125;
  Statistics statistics = Statistics::Bose;
  GapDirection gap_direction = GapDirection::Increasing;

  double half_period() const { return 0.5 * period; }
  void validate() const;
};

double omega_of_t(const EngineParams& p, double t);
/// dOmega/dt on the stroke that starts at t0 (0 or T/2).
double omega_rate(const EngineParams& p, double t0);
/// E_t = sqrt(Omega(t)^2 + Delta^2).
double gap_energy(const EngineParams& p, double t);
/// Mixing angle with tan(theta) = -Omega/Delta; theta in (-pi/2, pi/2) for
/// Delta > 0 and theta = -pi/2 sign(Omega) for Delta = 0.
double mixing_angle(const EngineParams& p, double t);
/// phi(t, t0) = integral of 2 E over [t0, t], closed form for linear sweeps.
double adiabatic_phase(const EngineParams& p, double t, double t0);
/// Start of the stroke containing t: 0 for t < T/2, T/2 otherwise.
double stroke_start(const EngineParams& p, double t);
/// Inverse temperature of the bath that prepared the stroke starting at t0.
double stroke_beta(const EngineParams& p, double t0);

/// Sets beta_c and beta_h from the dimensionless products beta_c E_0 and
/// beta_h E_{T/2}.
void set_bath_products(EngineParams& p, double beta_c_e0, double beta_h_ehalf);

struct ImpulseCoupling {
  double g = 0.01;
  double t1 = 0.0;
};

/// Two tanh plateaus of area g each, one per work stroke.
struct SmoothPlateauCoupling {
  double g = 0.5;
  double delta_t = 0.9;
  double alpha = 0.0;
  double t_on = 0.0;
  double t_off = 0.0;
  double period = 0.0;
};

/// Piecewise-linear coupling on a time grid, zero outside it.
struct SampledCoupling {
  std::vector<double> times;
  std::vector<double> values;
};

using CouplingSchedule = std::variant<ImpulseCoupling, SmoothPlateauCoupling, SampledCoupling>;

/// Standard plateau: t_on = (1 - delta_t) T / 4, t_off = t_on + delta_t T / 2.
SmoothPlateauCoupling smooth_plateau(double g, double delta_t, double alpha, double period);
double plateau_height(const SmoothPlateauCoupling& s);

double g_of_t(const CouplingSchedule& schedule, double t);
/// Integral of g_C over [a, b]; exact for impulse and plateau, trapezoid on the
/// native grid for sampled schedules.
double coupling_integral(const CouplingSchedule& schedule, double a, double b);
/// Points inside (a, b) where the integrand changes character.
std::vector<double> schedule_breakpoints(const CouplingSchedule& schedule, double a, double b);
void validate_schedule(const CouplingSchedule& schedule, const EngineParams& p);
bool is_impulse(const CouplingSchedule& schedule);

/// Driven system with H_S = diag(energies) in its own eigenbasis.
struct ExternalSystem {
  std::vector<double> energies;
  DenseOperator coupling;
  std::string label;

  Index dim() const { return static_cast<Index>(energies.size()); }
  void validate() const;
};

/// Oscillator truncated to `dim` levels with V_S = c + c^dagger.
ExternalSystem harmonic_system(double omega, Index dim);

/// <i| V_S^{(I)}(t) |0> = <i|V_S|0> exp(i eps_i t).
Complex coupling_element(const ExternalSystem& system, Index i, double t);

/// First excitation energy, used for step-size rules.
double lowest_excitation(const ExternalSystem& system);

}  // namespace qstat

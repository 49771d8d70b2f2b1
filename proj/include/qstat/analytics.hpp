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

#include <optional>
#include <string>
#include <vector>

#include "qstat/protocols.hpp"

namespace qstat {

// ---------------------------------------------------------------------------
// Thermal moments of m in the Dicke ladder, weights exp(-2 x m), x = beta E.

struct MomentSet {
  int n = 1;
  double x = 0.0;
  double f = 0.0;  ///< <m^2>
  double h = 0.0;  ///< <m>, non-positive for x >= 0
  double f_plus = 0.0;
  double f_minus = 0.0;
};

/// <m^2>. Evaluated from derivatives of log Z with Z = sinh((N+1)x)/sinh(x),
/// arranged so that no step cancels; x = +inf gives N^2/4.
double moment_f(int n, double x);
/// <m>; equals -tanh(x)/2 for N = 1.
double moment_h(int n, double x);
/// |<m>|, the sign convention used when h enters products of two moments.
inline double moment_h_magnitude(int n, double x) { return -moment_h(n, x); }
/// Thermal variance <m^2> - <m>^2.
double moment_variance(int n, double x);
MomentSet moments(int n, double x);

/// The sinh-ratio expressions exactly as usually printed. Accurate only while
/// (N+3) x stays well inside the double range and x is not tiny.
double moment_f_sinh_ratio(int n, double x);
double moment_h_sinh_ratio(int n, double x);

// ---------------------------------------------------------------------------
// Engine correlators in the adiabatic approximation.

/// <[V_R(t)]^2> for a single instant.
double second_moment_indist(int n, double x, double theta);
double second_moment_dist(int n, double x, double theta);
double second_moment(Statistics s, int n, double x, double theta);

struct CorrelatorValue {
  Complex value;
  /// True when t and t' lie on opposite sides of the thermal reset and the
  /// value is the product of one-time averages.
  bool factorized = false;
};

CorrelatorValue correlator_indist(const EngineParams& p, double t, double t_prime, double t0);
CorrelatorValue correlator_dist(const EngineParams& p, double t, double t_prime, double t0);

enum class SingleAvgVariant { FirstMoment, AsPrinted };

/// 2 cos(theta_t) <m>; the variant that reproduces the Dicke trace.
double single_avg_first_moment(const EngineParams& p, double t, double t0);
/// 2 cos(theta_t) <m^2>, kept for comparison.
double single_avg_as_printed(const EngineParams& p, double t, double t0);
/// Indistinguishable: dispatches on the variant. Distinguishable:
/// -N cos(theta_t) tanh(beta E), the sign a thermal spin actually carries.
double single_avg(const EngineParams& p, double t, double t0, Statistics s,
                  SingleAvgVariant variant = SingleAvgVariant::FirstMoment);

// ---------------------------------------------------------------------------
// Work records.

enum class WorkMethod { ImpulseClosedForm, GeneralPerturbative, ExactNumerical, FermiClosedForm };
std::string_view to_string(WorkMethod m);

inline constexpr double kPerturbativeWarn = 0.1;
inline constexpr double kPerturbativeFail = 0.5;

struct WorkRecord {
  /// Level energies and probabilities p_i of finding S in level i after the
  /// cycle; entry 0 is the ground level. Empty for the fermionic closed form.
  std::vector<double> energies;
  std::vector<double> p_excite;
  double avg_work = 0.0;
  Statistics statistics = Statistics::Bose;
  WorkMethod method = WorkMethod::GeneralPerturbative;
  std::optional<double> enhancement_ratio;
  bool perturbative_warning = false;

  /// Sum of p_i over excited levels.
  double excitation() const;
  /// Recomputes avg_work from energies and p_excite.
  double work_from_levels() const;
};

/// Builds a record from excited-level probabilities (index 0 ignored), sets
/// p_0 = 1 - sum and applies the perturbative guard for perturbative methods.
WorkRecord make_work_record(const std::vector<double>& energies, std::vector<double> p, Statistics s,
                            WorkMethod method);

/// Impulse kick g delta(t - t1): p_i = g^2 <V_R(t1)^2> |<i|V_S|0>|^2.
WorkRecord impulse_work(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system,
                        Statistics s);

struct Amplitudes {
  Index level = 1;
  double t0 = 0.0;
  Complex c_plus;
  Complex c_minus;
  Complex d;
};

struct QuadratureOptions {
  double rel_tol = 1e-11;
  /// Absolute floor relative to the integrand scale.
  double abs_tol = 1e-10;
  int max_depth = 18;
};

Amplitudes compute_amplitudes(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system,
                              Index level, double t0, const QuadratureOptions& options = {});

/// Per-level probability assembled from amplitudes of both strokes.
double probability_from_amplitudes(const EngineParams& p, const Amplitudes& cold, const Amplitudes& hot,
                                   Statistics s);
double general_probability(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system,
                           Statistics s, Index level);
/// All excited levels at once; enhancement ratio filled in from the other
/// statistics.
WorkRecord general_work(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system,
                        Statistics s);
/// Dispatches on the schedule: impulse closed form or general perturbative.
WorkRecord analytic_work(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system,
                         Statistics s);

// ---------------------------------------------------------------------------
// Enhancement maps, asymptotics and the inequality battery.

struct RegionCell {
  double delta_over_omega0 = 0.0;
  double omega_t = 0.0;
  int n = 1;
  bool enhanced = true;
  double ratio = 1.0;
};

struct RegionSpec {
  EngineParams base;  ///< Omega0, v, T and the drive direction
  double beta_c_e0 = 2.0;
  double beta_h_ehalf = 0.25;
  double g = 0.01;
  double delta_t = 0.9;
  double alpha_t = 2142.0;  ///< alpha in units of 1/T
  std::vector<double> delta_over_omega0;
  std::vector<double> omega_t;
  std::vector<int> ns;
};

/// Row-major over (delta, omegaT, N). Cells are independent; `threads` > 1
/// evaluates them concurrently with deterministic output order.
std::vector<RegionCell> enhancement_region(const RegionSpec& spec, int threads = 1);

struct AsymptoticRow {
  int n = 1;
  double exact = 0.0;
  double large_n = 0.0;
  double small_n = 0.0;
};

struct AsymptoticReport {
  double x = 0.0;  ///< beta_c E_0
  double slope = 0.0;  ///< coth(x)
  double f1 = 0.0;
  double f2 = 0.0;
  /// N at which N x = 1.
  double crossover_n = 0.0;
  std::vector<AsymptoticRow> rows;
};

/// Large-N line coth(x) N - (coth(x) - 1) coth(x).
double large_n_second_moment(int n, double x);
double small_n_f1(double x);
double small_n_f2(double x);
/// Requires Delta = 0.
AsymptoticReport asymptotic_checks(const EngineParams& p, const std::vector<int>& ns);

struct InequalityMargins {
  double upper_f = kInfinity;  ///< N^2/4 - f
  double variance_dist = kInfinity;  ///< 4f - N - N(N-1) tanh^2
  double ladder_plus = kInfinity;  ///< N/2(N/2+1) - F_+ - N/2(1 + tanh)
  double ladder_minus = kInfinity;  ///< N/2(N/2+1) - F_- - N/2(1 - tanh)
  double cross = kInfinity;  ///< 4 h(x) h(y) - N^2 tanh x tanh y
  double worst() const;
};

/// Margins for one (N, x, y) triple.
InequalityMargins inequality_margins(int n, double x, double y);

struct InequalityReport {
  InequalityMargins worst;
  /// Largest |margin| at N = 1, where the bounds are equalities.
  double n1_equality_error = 0.0;
  std::size_t checks = 0;
};

/// Checks every N in [1, n_max] and x, y in the grid. Violation beyond
/// -1e-12 (relative to the scale of the bound) raises InequalityViolation.
InequalityReport verify_inequalities(int n_max, const std::vector<double>& x_grid);

}  // namespace qstat

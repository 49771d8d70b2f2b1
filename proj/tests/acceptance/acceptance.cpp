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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// fails. Parameters are spelled out here rather than taken from the figure
// presets so the two can be checked against each other.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qstat/analytics.hpp"
#include "qstat/dynamics.hpp"
#include "qstat/errors.hpp"
#include "qstat/fermi.hpp"
#include "qstat/figures.hpp"

using namespace qstat;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kT = 20.0;
const double kOmegaHo = 2.0 * kPi * 0.05 / kT;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Numerical hygiene gathered from every exact run in the program.
struct Hygiene {
  double trace = 0.0;
  double hermiticity = 0.0;
  double stroke_drift = 0.0;
  int runs = 0;

  void record(const CycleResult& r) {
    const StateCheck c = r.final_state.check();
    trace = std::max(trace, c.trace_error);
    hermiticity = std::max(hermiticity, c.hermiticity_error);
    for (double d : r.diagnostics.stroke_drift) stroke_drift = std::max(stroke_drift, d);
    ++runs;
  }
} hygiene;

CycleResult cycle(const EngineParams& p, const CouplingSchedule& s, const ExternalSystem& sys, Statistics st,
                  const PropagatorConfig& c = {}) {
  CycleResult r = run_cycle(p, s, sys, st, c);
  hygiene.record(r);
  return r;
}

EngineParams fig2_engine(int n, double delta, double beta_c_e0 = 2.0) {
  EngineParams p;
  p.n = n;
  p.omega0 = 1.0;
  p.delta = delta;
  p.v = -0.1;
  p.period = kT;
  set_bath_products(p, beta_c_e0, 0.25);
  return p;
}

const ImpulseCoupling kFig2Kick{0.01, 0.35 * kT / 2};
const SmoothPlateauCoupling kFig3Plateau = smooth_plateau(0.5, 0.9, 2142.0 / kT, kT);

// 1. Closed-form moments against direct sums.
Outcome moments_vs_sums() {
  double worst = 0.0;
  for (int n = 1; n <= 60; ++n) {
    for (double x : {1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 50.0}) {
      worst = std::max(worst, std::abs(moment_f(n, x) - testing::direct_f(n, x)));
      worst = std::max(worst, std::abs(moment_h(n, x) - testing::direct_h(n, x)));
    }
  }
  return {worst <= 1e-12, "max |closed - direct| = " + fmt(worst)};
}

// 2. Inequality battery on the grid and at random points, with margins from
// direct sums for the random draws.
Outcome inequalities() {
  std::vector<double> grid;
  for (int k = 0; k < 40; ++k) grid.push_back(std::pow(10.0, -3.0 + 5.0 * k / 39.0));
  InequalityReport rep;
  try {
    rep = verify_inequalities(60, grid);
  } catch (const Error& e) {
    return {false, e.what()};
  }
  testing::Gen gen(2024);
  double worst = kInfinity;
  double n1 = rep.n1_equality_error;
  for (int k = 0; k < 10000; ++k) {
    const int n = gen.integer(1, 60);
    const double x = gen.log_uniform(1e-3, 50.0);
    const double y = gen.log_uniform(1e-3, 50.0);
    const double f = testing::direct_f(n, x);
    const double h = testing::direct_h(n, x);
    const double tx = std::tanh(x), ty = std::tanh(y);
    const double j = 0.25 * n * (n + 2.0);
    const double margins[] = {
        0.25 * n * n - f,
        4.0 * f - n - n * (n - 1.0) * tx * tx,
        j - (f + h) - 0.5 * n * (1.0 + tx),
        j - (f - h) - 0.5 * n * (1.0 - tx),
        4.0 * h * testing::direct_h(n, y) - double(n) * n * tx * ty,
    };
    const double scale = std::max(1.0, 0.25 * n * n);
    for (double m : margins) {
      worst = std::min(worst, m / scale);
      if (n == 1) n1 = std::max(n1, std::abs(m));
    }
    const InequalityMargins lib = inequality_margins(n, x, y);
    worst = std::min(worst, lib.worst() / scale);
  }
  const bool ok = worst >= -1e-12 && n1 <= 1e-12;
  return {ok, std::to_string(rep.checks) + " grid + 10000 random checks, worst scaled margin " + fmt(worst) +
                  ", N = 1 equality error " + fmt(n1)};
}

// 3. Impulse enhancement, closed form against exact propagation.
Outcome impulse_enhancement() {
  const ExternalSystem ho = harmonic_system(kOmegaHo, 12);
  double low = kInfinity, n1 = 0.0, worst = 0.0;
  for (double delta : {0.0, 1.4, 4.2}) {
    for (int n = 1; n <= 8; ++n) {
      const EngineParams p = fig2_engine(n, delta);
      const double ana = *impulse_work(p, kFig2Kick, ho, Statistics::Bose).enhancement_ratio;
      const double num = cycle(p, kFig2Kick, ho, Statistics::Bose).work.avg_work /
                         cycle(p, kFig2Kick, ho, Statistics::Distinguishable).work.avg_work;
      low = std::min(low, ana);
      if (n == 1) n1 = std::max(n1, std::abs(ana - 1.0));
      worst = std::max(worst, rel(num, ana));
    }
  }
  return {low >= 1.0 - 1e-12 && n1 <= 1e-12 && worst < 0.02,
          "min E = " + fmt(low) + ", |E(1) - 1| = " + fmt(n1) + ", max numeric/analytic deviation " + fmt(worst)};
}

// 4. Quadratic scaling at Delta = 0.
Outcome quadratic_scaling() {
  const ExternalSystem ho = harmonic_system(kOmegaHo, 12);
  double worst_r2 = 1.0;
  int columns = 0;
  // beta_h E_{T/2} = 1/4 with E_{T/2} = 2 E_0 needs beta_c E_0 > 1/8.
  for (double b : {0.15, 0.2, 0.25, 0.3}) {
    std::vector<double> ns, roots;
    const double w1 = impulse_work(fig2_engine(1, 0.0, b), kFig2Kick, ho, Statistics::Bose).avg_work;
    for (int n = 1; n * b <= 1.0 + 1e-12; ++n) {
      const double w = impulse_work(fig2_engine(n, 0.0, b), kFig2Kick, ho, Statistics::Bose).avg_work;
      ns.push_back(n);
      roots.push_back(std::sqrt(w / w1));
    }
    if (ns.size() >= 3) {
      worst_r2 = std::min(worst_r2, linear_r2(ns, roots));
      ++columns;
    }
  }
  double worst_slope = 0.0;
  for (double b : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double slope = second_moment_indist(500, b, -0.5 * kPi) - second_moment_indist(499, b, -0.5 * kPi);
    worst_slope = std::max(worst_slope, rel(slope, 1.0 / std::tanh(b)));
  }
  return {columns > 0 && worst_r2 > 0.99 && worst_slope < 1e-3,
          std::to_string(columns) + " columns, min R^2 = " + fmt(worst_r2) + ", slope deviation at N = 500 " +
              fmt(worst_slope)};
}

SampledCoupling random_schedule(testing::Gen& gen) {
  SampledCoupling s;
  const int bumps = gen.integer(1, 4);
  std::vector<double> c(bumps), w(bumps), a(bumps);
  for (int k = 0; k < bumps; ++k) {
    c[k] = gen.uniform(0.05, 0.95) * kT;
    w[k] = gen.uniform(0.02, 0.2) * kT;
    a[k] = gen.uniform(-1.0, 1.0) * 0.02 / kT;
  }
  for (int i = 0; i < 401; ++i) {
    const double t = kT * i / 400.0;
    double v = 0.0;
    for (int k = 0; k < bumps; ++k) v += a[k] * std::exp(-0.5 * std::pow((t - c[k]) / w[k], 2));
    const double env = std::sin(2.0 * kPi * t / kT);
    s.times.push_back(t);
    s.values.push_back(v * env * env);
  }
  return s;
}

ExternalSystem random_spectrum(testing::Gen& gen) {
  const int dim = gen.integer(2, 5);
  std::vector<double> e{0.0};
  for (int i = 1; i < dim; ++i) e.push_back(e.back() + gen.log_uniform(0.01, 3.0) / kT);
  CMatrix v = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      v(i, j) = Complex(gen.uniform(-1.0, 1.0), i == j ? 0.0 : gen.uniform(-1.0, 1.0));
      v(j, i) = std::conj(v(i, j));
    }
  }
  return ExternalSystem{std::move(e), DenseOperator(SpaceKind::generic(dim), v), "random"};
}

// 5. Indistinguishable engines dominate level by level at Delta = 0.
Outcome universal_dominance() {
  testing::Gen gen(77);
  double worst = kInfinity;
  int levels = 0;
  for (int trial = 0; trial < 200; ++trial) {
    EngineParams p;
    p.n = gen.integer(2, 8);
    p.omega0 = gen.uniform(0.5, 2.0);
    p.delta = 0.0;
    p.v = -gen.uniform(0.02, 0.15);
    p.period = kT;
    set_bath_products(p, gen.uniform(0.2, 4.0), gen.uniform(0.01, 0.15));
    const SampledCoupling s = random_schedule(gen);
    const ExternalSystem sys = random_spectrum(gen);
    const WorkRecord wi = general_work(p, s, sys, Statistics::Bose);
    const WorkRecord wd = general_work(p, s, sys, Statistics::Distinguishable);
    for (std::size_t i = 1; i < wi.p_excite.size(); ++i) {
      worst = std::min(worst, wi.p_excite[i] - wd.p_excite[i]);
      ++levels;
    }
  }
  return {worst >= -1e-12, std::to_string(levels) + " levels, min p_indist - p_dist = " + fmt(worst)};
}

// 6. Strong plateau coupling, exact propagation only.
std::vector<double> fig3_bose, fig3_dist;

Outcome nonperturbative() {
  const ExternalSystem ho = harmonic_system(kOmegaHo, 16);
  for (int n = 1; n <= 6; ++n) {
    const EngineParams p = fig2_engine(n, 0.0);
    fig3_bose.push_back(cycle(p, kFig3Plateau, ho, Statistics::Bose).work.avg_work);
    fig3_dist.push_back(cycle(p, kFig3Plateau, ho, Statistics::Distinguishable).work.avg_work);
  }
  double min_e = kInfinity;
  bool monotone = true;
  for (std::size_t k = 1; k < fig3_bose.size(); ++k) {
    min_e = std::min(min_e, fig3_bose[k] / fig3_dist[k]);
    monotone = monotone && std::sqrt(fig3_bose[k] / fig3_bose[0]) > std::sqrt(fig3_bose[k - 1] / fig3_bose[0]);
  }
  return {min_e > 1.0 && monotone,
          "min E(N >= 2) = " + fmt(min_e) + ", sqrt ratio " + (monotone ? "increasing" : "not increasing")};
}

// 7. Enhancement-region map.
Outcome enhancement_map() {
  RegionSpec spec;
  spec.base.omega0 = 1.0;
  spec.base.v = -0.1;
  spec.base.period = kT;
  for (int k = 0; k <= 16; ++k) spec.delta_over_omega0.push_back(0.25 * k);
  for (int k = 0; k < 40; ++k) spec.omega_t.push_back(0.1 + (10.0 * kPi - 0.1) * k / 39.0);
  spec.ns = {2, 5, 10, 15, 20};
  const auto cells = enhancement_region(spec);
  bool n2 = true, column = true, hole = false;
  for (const auto& c : cells) {
    if (c.n == 2) n2 = n2 && c.enhanced;
    if (c.delta_over_omega0 == 0.0) column = column && c.enhanced;
    if (c.n == 20 && c.omega_t > kPi && !c.enhanced) hole = true;
  }
  return {n2 && column && hole, std::to_string(cells.size()) + " cells; N = 2 plane " +
                                    (n2 ? "enhanced" : "has gaps") + "; Delta = 0 column " +
                                    (column ? "enhanced" : "has gaps") + "; N = 20 gap above pi " +
                                    (hole ? "found" : "missing")};
}

// 8. Fermionic parity law.
FermiEnsemble fermi_ensemble(int n, double beta_omega) {
  FermiEnsemble e;
  e.n = n;
  e.omega_trap = 1.0;
  e.beta_com = beta_omega;
  e.engine.n = n;
  e.engine.omega0 = 0.0;
  e.engine.delta = 1.0;
  e.engine.v = -0.5;
  e.engine.period = kT;
  e.engine.statistics = Statistics::Fermi;
  set_bath_products(e.engine, 1.0, 0.125);
  return e;
}

double enumerated_f(const FermiEnsemble& e) {
  double f = 0.0;
  for (const auto& c : enumerate_configs(e)) f += c.weight * c.active;
  return f;
}

Outcome parity_law() {
  double even = 0.0, odd = 0.0;
  for (double b = 4.0; b <= 6.0 + 1e-9; b += 0.25) {
    for (int n : {2, 4}) even = std::max(even, std::abs(enumerated_f(fermi_ensemble(n, b)) / (8.0 * std::exp(-b)) - 1.0));
    for (int n : {3, 5}) {
      odd = std::max(odd, std::abs((enumerated_f(fermi_ensemble(n, b)) - 1.0) / (8.0 * std::exp(-2.0 * b)) - 1.0));
    }
  }
  testing::Gen gen(8);
  double spread = 0.0;
  for (int n = 2; n <= 5; ++n) {
    const FermiEnsemble base = fermi_ensemble(n, 5.0);
    const double ref = *fermi_work(base).enhancement_ratio;
    for (int k = 0; k < 50; ++k) {
      FermiEnsemble e = base;
      set_bath_products(e.engine, gen.uniform(0.3, 5.0), gen.uniform(0.01, 0.25));
      spread = std::max(spread, std::abs(*fermi_work(e).enhancement_ratio - ref));
    }
  }
  bool limits = true;
  for (int n = 1; n <= 6; ++n) limits = limits && fermi_f(fermi_ensemble(n, kInfinity)) == double(n % 2);
  return {even < 0.1 && odd < 0.2 && spread <= 1e-12 && limits,
          "even deviation " + fmt(even) + ", odd deviation " + fmt(odd) + ", lambda spread over baths " +
              fmt(spread) + ", zero-temperature limits " + (limits ? "exact" : "wrong")};
}

// 9. Literal product space and Dicke sector against the closed forms.
Outcome oracle_equivalence() {
  const ExternalSystem ho = harmonic_system(kOmegaHo, 12);
  const SmoothPlateauCoupling weak = smooth_plateau(0.01, 0.9, 2142.0 / kT, kT);
  PropagatorConfig kron;
  kron.product_method = ProductMethod::Kronecker;
  double worst_dist = 0.0, worst_indist = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const EngineParams p = fig2_engine(n, 1.4);
    for (const CouplingSchedule& s : {CouplingSchedule{kFig2Kick}, CouplingSchedule{weak}}) {
      const double dist = analytic_work(p, s, ho, Statistics::Distinguishable).avg_work;
      const double indist = analytic_work(p, s, ho, Statistics::Bose).avg_work;
      worst_dist = std::max(worst_dist, rel(cycle(p, s, ho, Statistics::Distinguishable, kron).work.avg_work, dist));
      worst_indist = std::max(worst_indist, rel(cycle(p, s, ho, Statistics::Bose).work.avg_work, indist));
    }
  }
  return {worst_dist < 0.02 && worst_indist < 0.02,
          "product space " + fmt(worst_dist) + ", Dicke sector " + fmt(worst_indist) + " max relative deviation"};
}

// 10. Hygiene: state checks from every run above, step convergence and
// truncation independence.
Outcome hygiene_checks() {
  std::ostringstream detail;
  bool ok = true;

  const ExternalSystem ho16 = harmonic_system(kOmegaHo, 16);
  const EngineParams p3 = fig2_engine(2, 0.0);
  const double rule = step_rule(p3, kFig3Plateau, ho16);
  auto work_at = [&](double dt) {
    PropagatorConfig c;
    c.dt = dt;
    return cycle(p3, kFig3Plateau, ho16, Statistics::Bose, c).work.avg_work;
  };
  const double w1 = work_at(rule), w2 = work_at(rule / 2), w4 = work_at(rule / 4), w8 = work_at(rule / 8);
  // Second-order Richardson limit of the two finest runs.
  const double limit = (4.0 * w8 - w4) / 3.0;
  const double ratio = std::abs(w1 - limit) / std::abs(w2 - limit);
  ok = ok && ratio >= 4.0;
  detail << "dt halving ratio " << std::to_string(ratio);

  double worst_trunc = 0.0;
  {
    const EngineParams p = fig2_engine(4, 1.4);
    const double a = cycle(p, kFig2Kick, harmonic_system(kOmegaHo, 12), Statistics::Bose).work.avg_work;
    const double b = cycle(p, kFig2Kick, harmonic_system(kOmegaHo, 24), Statistics::Bose).work.avg_work;
    worst_trunc = std::max(worst_trunc, rel(a, b));
  }
  {
    const double a = cycle(p3, kFig3Plateau, ho16, Statistics::Bose).work.avg_work;
    const double b = cycle(p3, kFig3Plateau, harmonic_system(kOmegaHo, 32), Statistics::Bose).work.avg_work;
    worst_trunc = std::max(worst_trunc, rel(a, b));
  }
  {
    // Five active engines of the fermionic protocol.
    EngineParams p = fermi_ensemble(5, 4.0).engine;
    p.statistics = Statistics::Distinguishable;
    const SmoothPlateauCoupling s = smooth_plateau(0.5, 0.98, 2000.0 / kT, kT);
    const double a = cycle(p, s, harmonic_system(kOmegaHo, 24), Statistics::Distinguishable).work.avg_work;
    const double b = cycle(p, s, harmonic_system(kOmegaHo, 48), Statistics::Distinguishable).work.avg_work;
    worst_trunc = std::max(worst_trunc, rel(a, b));
  }
  ok = ok && worst_trunc < 1e-6;
  detail << ", truncation doubling " << fmt(worst_trunc);

  ok = ok && hygiene.trace <= 1e-10 && hygiene.hermiticity <= 1e-10 && hygiene.stroke_drift < 1e-10;
  detail << "; over " << hygiene.runs << " runs: trace " << fmt(hygiene.trace) << ", hermiticity "
         << fmt(hygiene.hermiticity) << ", stroke drift " << fmt(hygiene.stroke_drift);
  return {ok, detail.str()};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "moment closed forms match direct sums", 1.0, moments_vs_sums},
      {2, "inequality battery", 10.0, inequalities},
      {3, "impulse enhancement", 300.0, impulse_enhancement},
      {4, "quadratic scaling at Delta = 0", 30.0, quadratic_scaling},
      {5, "level-by-level dominance at Delta = 0", 60.0, universal_dominance},
      {6, "nonperturbative plateau coupling", 600.0, nonperturbative},
      {7, "enhancement-region map", 120.0, enhancement_map},
      {8, "fermionic parity law", 60.0, parity_law},
      {9, "product space and Dicke sector against closed forms", 300.0, oracle_equivalence},
      {10, "numerical hygiene", kInfinity, hygiene_checks},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.ok && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s %2d %s: %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

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

#include "qstat/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qstat/parallel.hpp"
#include "special.hpp"

namespace qstat {

namespace {

double ladder_casimir(int n) { return 0.25 * n * (n + 2.0); }

double stroke_x(const EngineParams& p, double t0) { return stroke_beta(p, t0) * gap_energy(p, t0); }

void require_in_stroke(const EngineParams& p, double t, double t0) {
  require(stroke_start(p, t) == t0 || (t == p.period && t0 == p.half_period()) ||
              (t == p.half_period() && t0 == 0.0),
          ErrorCode::InvalidArgument, "time lies outside the stroke starting at t0");
}

double csch2(double x) {
  if (x > 20.0) {
    const double e = std::exp(-2.0 * x);
    return 4.0 * e / ((1.0 - e) * (1.0 - e));
  }
  const double s = std::sinh(x);
  return 1.0 / (s * s);
}

}  // namespace

double second_moment_indist(int n, double x, double theta) {
  const double f = moment_f(n, x);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return (0.5 * n * (n + 2.0) - 2.0 * f) * s * s + 4.0 * f * c * c;
}

double second_moment_dist(int n, double x, double theta) {
  require(n >= 1, ErrorCode::InvalidArgument, "N must be positive");
  const double th = std::tanh(x);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return n * s * s + (n + n * (n - 1.0) * th * th) * c * c;
}

double second_moment(Statistics s, int n, double x, double theta) {
  switch (s) {
    case Statistics::Bose: return second_moment_indist(n, x, theta);
    case Statistics::Distinguishable: return second_moment_dist(n, x, theta);
    case Statistics::Fermi: break;
  }
  fail(ErrorCode::InvalidArgument, "second moment is defined for bose and distinguishable engines");
}

double single_avg_first_moment(const EngineParams& p, double t, double t0) {
  require_in_stroke(p, t, t0);
  return 2.0 * std::cos(mixing_angle(p, t)) * moment_h(p.n, stroke_x(p, t0));
}

double single_avg_as_printed(const EngineParams& p, double t, double t0) {
  require_in_stroke(p, t, t0);
  return 2.0 * std::cos(mixing_angle(p, t)) * moment_f(p.n, stroke_x(p, t0));
}

double single_avg(const EngineParams& p, double t, double t0, Statistics s, SingleAvgVariant variant) {
  if (s == Statistics::Distinguishable) {
    require_in_stroke(p, t, t0);
    return -p.n * std::cos(mixing_angle(p, t)) * std::tanh(stroke_x(p, t0));
  }
  require(s == Statistics::Bose, ErrorCode::InvalidArgument, "single average needs bose or distinguishable");
  return variant == SingleAvgVariant::FirstMoment ? single_avg_first_moment(p, t, t0)
                                                  : single_avg_as_printed(p, t, t0);
}

CorrelatorValue correlator_indist(const EngineParams& p, double t, double t_prime, double t0) {
  const double s1 = stroke_start(p, t);
  const double s2 = stroke_start(p, t_prime);
  if (s1 != s2) {
    return {Complex(single_avg_first_moment(p, t_prime, s2) * single_avg_first_moment(p, t, s1), 0.0), true};
  }
  require_in_stroke(p, t, t0);
  const MomentSet m = moments(p.n, stroke_x(p, t0));
  const double th = mixing_angle(p, t);
  const double thp = mixing_angle(p, t_prime);
  const double phi = adiabatic_phase(p, t_prime, t);
  const double j = ladder_casimir(p.n);
  const Complex ladder = std::polar(j - m.f_plus, -phi) + std::polar(j - m.f_minus, phi);
  return {4.0 * std::cos(th) * std::cos(thp) * m.f + std::sin(th) * std::sin(thp) * ladder, false};
}

CorrelatorValue correlator_dist(const EngineParams& p, double t, double t_prime, double t0) {
  const double s1 = stroke_start(p, t);
  const double s2 = stroke_start(p, t_prime);
  if (s1 != s2) {
    return {Complex(single_avg(p, t_prime, s2, Statistics::Distinguishable) *
                        single_avg(p, t, s1, Statistics::Distinguishable),
                    0.0),
            true};
  }
  require_in_stroke(p, t, t0);
  const double x = stroke_x(p, t0);
  const double tx = std::tanh(x);
  const double n = p.n;
  const double th = mixing_angle(p, t);
  const double thp = mixing_angle(p, t_prime);
  const double phi = adiabatic_phase(p, t_prime, t);
  // e^{s(i phi - x)} / cosh x = e^{i s phi} (1 - s tanh x)
  const Complex ladder = std::polar(1.0 - tx, phi) + std::polar(1.0 + tx, -phi);
  return {std::cos(th) * std::cos(thp) * (n + n * (n - 1.0) * tx * tx) +
              0.5 * n * std::sin(th) * std::sin(thp) * ladder,
          false};
}

std::string_view to_string(WorkMethod m) {
  switch (m) {
    case WorkMethod::ImpulseClosedForm: return "impulse-closed-form";
    case WorkMethod::GeneralPerturbative: return "general-perturbative";
    case WorkMethod::ExactNumerical: return "exact-numerical";
    case WorkMethod::FermiClosedForm: return "fermi-closed-form";
  }
  return "unknown";
}

double WorkRecord::excitation() const {
  double sum = 0.0;
  for (std::size_t i = 1; i < p_excite.size(); ++i) sum += p_excite[i];
  return sum;
}

double WorkRecord::work_from_levels() const {
  double sum = 0.0;
  for (std::size_t i = 1; i < p_excite.size() && i < energies.size(); ++i) sum += energies[i] * p_excite[i];
  return sum;
}

WorkRecord make_work_record(const std::vector<double>& energies, std::vector<double> p, Statistics s,
                            WorkMethod method) {
  require(p.size() == energies.size(), ErrorCode::InvalidArgument, "one probability per level expected");
  WorkRecord r;
  r.energies = energies;
  r.p_excite = std::move(p);
  r.statistics = s;
  r.method = method;
  const double excited = r.excitation();
  r.p_excite[0] = 1.0 - excited;
  r.avg_work = r.work_from_levels();
  if (method == WorkMethod::ImpulseClosedForm || method == WorkMethod::GeneralPerturbative) {
    require(excited < kPerturbativeFail, ErrorCode::NumericalFailure,
            "perturbative excitation " + std::to_string(excited) + " is outside the weak-coupling regime");
    r.perturbative_warning = excited >= kPerturbativeWarn;
  }
  return r;
}

WorkRecord impulse_work(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system,
                        Statistics s) {
  const auto* kick = std::get_if<ImpulseCoupling>(&schedule);
  if (kick == nullptr) fail(ErrorCode::InvalidVariant, "impulse_work needs an impulse schedule");
  p.validate();
  validate_schedule(schedule, p);
  system.validate();
  const double t0 = stroke_start(p, kick->t1);
  const double x = stroke_x(p, t0);
  const double theta = mixing_angle(p, kick->t1);
  const double m2 = second_moment(s, p.n, x, theta);
  std::vector<double> prob(system.energies.size(), 0.0);
  for (Index i = 1; i < system.dim(); ++i) prob[static_cast<std::size_t>(i)] = kick->g * kick->g * m2 * std::norm(system.coupling.matrix(i, 0));
  WorkRecord r = make_work_record(system.energies, std::move(prob), s, WorkMethod::ImpulseClosedForm);
  r.enhancement_ratio = second_moment_indist(p.n, x, theta) / second_moment_dist(p.n, x, theta);
  return r;
}

Amplitudes compute_amplitudes(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system,
                              Index level, double t0, const QuadratureOptions& options) {
  require(level >= 1 && level < system.dim(), ErrorCode::InvalidArgument, "level index out of range");
  const double half = p.half_period();
  require(t0 == 0.0 || t0 == half, ErrorCode::InvalidArgument, "t0 must be 0 or T/2");
  Amplitudes amp;
  amp.level = level;
  amp.t0 = t0;
  const double a = t0;
  const double b = t0 + half;
  const Complex vi0 = system.coupling.matrix(level, 0);
  if (vi0 == 0.0) return amp;

  if (const auto* kick = std::get_if<ImpulseCoupling>(&schedule)) {
    if (stroke_start(p, kick->t1) != t0) return amp;
    const double th = mixing_angle(p, kick->t1);
    const Complex ai = coupling_element(system, level, kick->t1);
    const double phi = adiabatic_phase(p, kick->t1, t0);
    amp.c_plus = kick->g * std::sin(th) * ai * std::polar(1.0, phi);
    amp.c_minus = kick->g * std::sin(th) * ai * std::polar(1.0, -phi);
    amp.d = -kick->g * std::cos(th) * ai;
    return amp;
  }

  // Cut the stroke at the coupling fronts and into pieces of at most two
  // periods of the fastest phase.
  std::vector<double> nodes{a};
  for (double t : schedule_breakpoints(schedule, a, b)) nodes.push_back(t);
  nodes.push_back(b);
  const double eps_i = system.energies[static_cast<std::size_t>(level)];
  const double rate = 2.0 * std::max(gap_energy(p, a), gap_energy(p, b)) + std::abs(eps_i);
  const double piece = rate > 0.0 ? 4.0 * std::numbers::pi / rate : half;
  std::vector<double> cuts{a};
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const double lo = nodes[k - 1];
    const double len = nodes[k] - lo;
    const int count = std::clamp(static_cast<int>(std::ceil(len / piece)), 1, 4096);
    for (int j = 1; j <= count; ++j) cuts.push_back(j == count ? nodes[k] : lo + len * j / count);
  }

  const bool has_cos = p.delta != 0.0;
  double scale = 0.0;
  for (std::size_t k = 1; k < cuts.size(); ++k) scale += std::abs(coupling_integral(schedule, cuts[k - 1], cuts[k]));
  scale = std::max(scale, 1e-300) * std::abs(vi0);

  // Adaptive bisection on the 15-point Kronrod rule. Boost's own driver only
  // knows a relative target, which never terminates where g_C is off; here each
  // interval gets its share of an absolute budget instead.
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double budget = options.abs_tol * scale / (b - a);
  auto integrate = [&](auto&& fn) {
    Complex total = 0.0;
    double err_total = 0.0;
    auto refine = [&](auto&& self, double lo, double hi, int depth) -> void {
      double err = 0.0;
      const Complex v = Quad::integrate(fn, lo, hi, 0, 0.0, &err);
      if (depth >= options.max_depth || err <= budget * (hi - lo) || err <= options.rel_tol * std::abs(v)) {
        total += v;
        err_total += err;
        return;
      }
      const double mid = 0.5 * (lo + hi);
      self(self, lo, mid, depth + 1);
      self(self, mid, hi, depth + 1);
    };
    for (std::size_t k = 1; k < cuts.size(); ++k) refine(refine, cuts[k - 1], cuts[k], 0);
    if (err_total > 1e3 * options.abs_tol * scale && err_total > 1e3 * options.rel_tol * std::abs(total)) {
      fail(ErrorCode::NumericalFailure, "amplitude quadrature did not converge: error estimate " +
                                            std::to_string(err_total) + " on [" + std::to_string(a) + ", " +
                                            std::to_string(b) + "]");
    }
    return total;
  };

  amp.c_plus = integrate([&](double t) {
    return g_of_t(schedule, t) * std::sin(mixing_angle(p, t)) * coupling_element(system, level, t) *
           std::polar(1.0, adiabatic_phase(p, t, t0));
  });
  amp.c_minus = integrate([&](double t) {
    return g_of_t(schedule, t) * std::sin(mixing_angle(p, t)) * coupling_element(system, level, t) *
           std::polar(1.0, -adiabatic_phase(p, t, t0));
  });
  if (has_cos) {
    amp.d = -integrate([&](double t) {
      return g_of_t(schedule, t) * std::cos(mixing_angle(p, t)) * coupling_element(system, level, t);
    });
  }
  return amp;
}

double probability_from_amplitudes(const EngineParams& p, const Amplitudes& cold, const Amplitudes& hot,
                                   Statistics s) {
  const int n = p.n;
  const double xc = stroke_x(p, 0.0);
  const double xh = stroke_x(p, p.half_period());
  const double cross = (cold.d * std::conj(hot.d)).real();
  double prob = 0.0;
  if (s == Statistics::Bose) {
    const double j = ladder_casimir(n);
    for (const auto& [amp, x] : {std::pair{&cold, xc}, std::pair{&hot, xh}}) {
      const MomentSet m = moments(n, x);
      prob += 4.0 * std::norm(amp->d) * m.f + std::norm(amp->c_plus) * (j - m.f_plus) +
              std::norm(amp->c_minus) * (j - m.f_minus);
    }
    prob += 8.0 * cross * moment_h(n, xc) * moment_h(n, xh);
  } else if (s == Statistics::Distinguishable) {
    for (const auto& [amp, x] : {std::pair{&cold, xc}, std::pair{&hot, xh}}) {
      const double tx = std::tanh(x);
      prob += std::norm(amp->d) * (n + n * (n - 1.0) * tx * tx) + std::norm(amp->c_plus) * 0.5 * n * (1.0 + tx) +
              std::norm(amp->c_minus) * 0.5 * n * (1.0 - tx);
    }
    prob += 2.0 * cross * n * n * std::tanh(xc) * std::tanh(xh);
  } else {
    fail(ErrorCode::InvalidArgument, "perturbative probability needs bose or distinguishable engines");
  }
  return prob;
}

double general_probability(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system,
                           Statistics s, Index level) {
  p.validate();
  validate_schedule(schedule, p);
  system.validate();
  const Amplitudes cold = compute_amplitudes(p, schedule, system, level, 0.0);
  const Amplitudes hot = compute_amplitudes(p, schedule, system, level, p.half_period());
  return probability_from_amplitudes(p, cold, hot, s);
}

WorkRecord general_work(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system,
                        Statistics s) {
  require(s != Statistics::Fermi, ErrorCode::InvalidArgument, "use fermi_work for fermionic engines");
  p.validate();
  validate_schedule(schedule, p);
  system.validate();
  const auto dim = static_cast<std::size_t>(system.dim());
  std::vector<double> prob(dim, 0.0);
  std::vector<double> other(dim, 0.0);
  const Statistics s_other = s == Statistics::Bose ? Statistics::Distinguishable : Statistics::Bose;
  for (Index i = 1; i < system.dim(); ++i) {
    const Amplitudes cold = compute_amplitudes(p, schedule, system, i, 0.0);
    const Amplitudes hot = compute_amplitudes(p, schedule, system, i, p.half_period());
    prob[static_cast<std::size_t>(i)] = probability_from_amplitudes(p, cold, hot, s);
    other[static_cast<std::size_t>(i)] = probability_from_amplitudes(p, cold, hot, s_other);
  }
  WorkRecord r = make_work_record(system.energies, std::move(prob), s, WorkMethod::GeneralPerturbative);
  double w_other = 0.0;
  for (std::size_t i = 1; i < dim; ++i) w_other += system.energies[i] * other[i];
  const double w_indist = s == Statistics::Bose ? r.avg_work : w_other;
  const double w_dist = s == Statistics::Bose ? w_other : r.avg_work;
  if (w_dist != 0.0) r.enhancement_ratio = w_indist / w_dist;
  return r;
}

WorkRecord analytic_work(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system,
                         Statistics s) {
  return is_impulse(schedule) ? impulse_work(p, schedule, system, s) : general_work(p, schedule, system, s);
}

std::vector<RegionCell> enhancement_region(const RegionSpec& spec, int threads) {
  const std::size_t nd = spec.delta_over_omega0.size();
  const std::size_t nw = spec.omega_t.size();
  const std::size_t nn = spec.ns.size();
  std::vector<RegionCell> cells(nd * nw * nn);
  parallel_for(nd * nw, threads, [&](std::size_t cell) {
    const std::size_t id = cell / nw;
    const std::size_t iw = cell % nw;
    EngineParams p = spec.base;
    p.delta = spec.delta_over_omega0[id] * std::abs(spec.base.omega0);
    set_bath_products(p, spec.beta_c_e0, spec.beta_h_ehalf);
    const double T = p.period;
    const double omega = spec.omega_t[iw] / T;
    CMatrix v(2, 2);
    v << 0.0, 1.0, 1.0, 0.0;
    const ExternalSystem system{{0.0, omega}, DenseOperator(SpaceKind::ho_truncated(2), v), "two-level"};
    const CouplingSchedule schedule = smooth_plateau(spec.g, spec.delta_t, spec.alpha_t / T, T);
    const Amplitudes cold = compute_amplitudes(p, schedule, system, 1, 0.0);
    const Amplitudes hot = compute_amplitudes(p, schedule, system, 1, p.half_period());
    for (std::size_t in = 0; in < nn; ++in) {
      EngineParams pn = p;
      pn.n = spec.ns[in];
      const double pi = probability_from_amplitudes(pn, cold, hot, Statistics::Bose);
      const double pd = probability_from_amplitudes(pn, cold, hot, Statistics::Distinguishable);
      RegionCell& out = cells[(id * nw + iw) * nn + in];
      out.delta_over_omega0 = spec.delta_over_omega0[id];
      out.omega_t = spec.omega_t[iw];
      out.n = pn.n;
      out.enhanced = pi >= pd - 1e-12 * std::max(std::abs(pi), std::abs(pd));
      out.ratio = pd != 0.0 ? pi / pd : 1.0;
    }
  });
  return cells;
}

double large_n_second_moment(int n, double x) {
  const double c = 1.0 / std::tanh(x);
  return c * n - (c - 1.0) * c;
}

double small_n_f1(double x) {
  if (x == 0.0) return 1.0 / 3.0;
  // x (x coth x - 1) cosh x / sinh^3 x, with x coth x - 1 = x L(x)
  return x * x * detail::langevin(x) / std::tanh(x) * csch2(x);
}

double small_n_f2(double x) {
  if (x == 0.0) return 2.0 / 3.0;
  return 1.0 - x * detail::langevin(x) * csch2(x);
}

AsymptoticReport asymptotic_checks(const EngineParams& p, const std::vector<int>& ns) {
  require(p.delta == 0.0, ErrorCode::InvalidArgument, "asymptotic forms assume Delta = 0");
  AsymptoticReport rep;
  rep.x = p.beta_c * gap_energy(p, 0.0);
  rep.slope = 1.0 / std::tanh(rep.x);
  rep.f1 = small_n_f1(rep.x);
  rep.f2 = small_n_f2(rep.x);
  rep.crossover_n = 1.0 / rep.x;
  for (int n : ns) {
    AsymptoticRow row;
    row.n = n;
    row.exact = second_moment_indist(n, rep.x, -0.5 * std::numbers::pi);
    row.large_n = large_n_second_moment(n, rep.x);
    row.small_n = rep.f1 * n * n + rep.f2 * n;
    rep.rows.push_back(row);
  }
  return rep;
}

double InequalityMargins::worst() const {
  return std::min({upper_f, variance_dist, ladder_plus, ladder_minus, cross});
}

InequalityMargins inequality_margins(int n, double x, double y) {
  const MomentSet m = moments(n, x);
  const double tx = std::tanh(x);
  const double j = ladder_casimir(n);
  InequalityMargins r;
  r.upper_f = 0.25 * n * n - m.f;
  r.variance_dist = 4.0 * m.f - (n + n * (n - 1.0) * tx * tx);
  r.ladder_plus = (j - m.f_plus) - 0.5 * n * (1.0 + tx);
  r.ladder_minus = (j - m.f_minus) - 0.5 * n * (1.0 - tx);
  r.cross = 4.0 * m.h * moment_h(n, y) - double(n) * n * tx * std::tanh(y);
  return r;
}

InequalityReport verify_inequalities(int n_max, const std::vector<double>& x_grid) {
  require(n_max >= 1, ErrorCode::InvalidArgument, "n_max must be positive");
  InequalityReport rep;
  for (int n = 1; n <= n_max; ++n) {
    const double tol = 1e-12 * std::max(1.0, 0.25 * n * n);
    for (double x : x_grid) {
      require(x > 0.0, ErrorCode::DomainError, "inequality grid must be positive");
      for (double y : x_grid) {
        const InequalityMargins m = inequality_margins(n, x, y);
        ++rep.checks;
        auto track = [&](double& worst, double value, const char* name) {
          if (value < -tol) {
            fail(ErrorCode::InequalityViolation, std::string(name) + " violated at N=" + std::to_string(n) +
                                                     ", x=" + std::to_string(x) + ", y=" + std::to_string(y) +
                                                     " by " + std::to_string(value));
          }
          worst = std::min(worst, value);
          if (n == 1) rep.n1_equality_error = std::max(rep.n1_equality_error, std::abs(value));
        };
        track(rep.worst.upper_f, m.upper_f, "f <= N^2/4");
        track(rep.worst.variance_dist, m.variance_dist, "4f >= N + N(N-1)tanh^2");
        track(rep.worst.ladder_plus, m.ladder_plus, "ladder bound (+)");
        track(rep.worst.ladder_minus, m.ladder_minus, "ladder bound (-)");
        track(rep.worst.cross, m.cross, "cross-term bound");
      }
    }
  }
  return rep;
}

}  // namespace qstat

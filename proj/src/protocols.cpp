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

#include "qstat/protocols.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

namespace qstat {

namespace {

double sweep_sign(const EngineParams& p) {
  return p.gap_direction == GapDirection::Increasing ? 1.0 : -1.0;
}

// Antiderivative of sqrt(x^2 + d^2).
double root_antiderivative(double x, double d) {
  if (d == 0.0) return 0.5 * x * std::abs(x);
  return 0.5 * (x * std::hypot(x, d) + d * d * std::asinh(x / d));
}

// Integral of 2 E over [ta, tb] where Omega is linear on the segment.
double segment_phase(const EngineParams& p, double ta, double tb) {
  if (tb == ta) return 0.0;
  const double wa = omega_of_t(p, ta);
  const double wb = omega_of_t(p, tb);
  const double dw = wb - wa;
  const double scale = std::max(std::abs(wa), std::abs(wb)) + p.delta;
  if (std::abs(dw) >= 1e-4 * scale) {
    const double rate = dw / (tb - ta);
    return 2.0 * (root_antiderivative(wb, p.delta) - root_antiderivative(wa, p.delta)) / rate;
  }
  // Nearly flat drive: the closed form cancels, quadrature does not.
  auto integrand = [&](double t) { return 2.0 * gap_energy(p, t); };
  return boost::math::quadrature::gauss<double, 10>::integrate(integrand, ta, tb);
}

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

double plateau_value(const SmoothPlateauCoupling& s, double t) {
  const double half = 0.5 * s.period;
  double sum = 0.0;
  for (int n = 0; n < 2; ++n) {
    sum += std::tanh(s.alpha * (t - s.t_on - n * half)) - std::tanh(s.alpha * (t - s.t_off - n * half));
  }
  return s.g / (s.delta_t * s.period) * sum;
}

double plateau_integral(const SmoothPlateauCoupling& s, double a, double b) {
  const double half = 0.5 * s.period;
  double sum = 0.0;
  for (int n = 0; n < 2; ++n) {
    const double on = s.t_on + n * half;
    const double off = s.t_off + n * half;
    sum += log_cosh(s.alpha * (b - on)) - log_cosh(s.alpha * (a - on));
    sum -= log_cosh(s.alpha * (b - off)) - log_cosh(s.alpha * (a - off));
  }
  return s.g / (s.delta_t * s.period) * sum / s.alpha;
}

double sampled_value(const SampledCoupling& s, double t) {
  const auto& ts = s.times;
  if (ts.empty() || t < ts.front() || t > ts.back()) return 0.0;
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  if (it == ts.end()) return s.values.back();
  const auto k = static_cast<std::size_t>(it - ts.begin());
  const double w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
  return (1.0 - w) * s.values[k - 1] + w * s.values[k];
}

double sampled_integral(const SampledCoupling& s, double a, double b) {
  const auto& ts = s.times;
  if (ts.size() < 2) return 0.0;
  const double lo = std::max(a, ts.front());
  const double hi = std::min(b, ts.back());
  if (hi <= lo) return 0.0;
  std::vector<double> nodes{lo};
  for (double t : ts)
    if (t > lo && t < hi) nodes.push_back(t);
  nodes.push_back(hi);
  double sum = 0.0;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    sum += 0.5 * (nodes[k] - nodes[k - 1]) * (sampled_value(s, nodes[k]) + sampled_value(s, nodes[k - 1]));
  }
  return sum;
}

}  // namespace

std::string_view to_string(Statistics s) {
  switch (s) {
    case Statistics::Bose: return "bose";
    case Statistics::Distinguishable: return "distinguishable";
    case Statistics::Fermi: return "fermi";
  }
  return "unknown";
}

std::string_view to_string(GapDirection d) {
  return d == GapDirection::Increasing ? "increasing" : "decreasing";
}

Statistics parse_statistics(std::string_view text) {
  if (text == "bose" || text == "indistinguishable") return Statistics::Bose;
  if (text == "distinguishable") return Statistics::Distinguishable;
  if (text == "fermi") return Statistics::Fermi;
  fail(ErrorCode::ConfigError, "unknown statistics '" + std::string(text) + "'");
}

GapDirection parse_gap_direction(std::string_view text) {
  if (text == "increasing") return GapDirection::Increasing;
  if (text == "decreasing") return GapDirection::Decreasing;
  fail(ErrorCode::ConfigError, "unknown gap_direction '" + std::string(text) + "'");
}

void EngineParams::validate() const {
  require(n >= 1, ErrorCode::InvalidArgument, "N must be positive");
  require(std::isfinite(period) && period > 0.0, ErrorCode::InvalidArgument, "period must be positive");
  require(std::isfinite(delta) && delta >= 0.0, ErrorCode::InvalidArgument, "Delta must be non-negative");
  require(std::isfinite(omega0) && std::isfinite(v), ErrorCode::InvalidArgument, "drive must be finite");
  require(beta_h >= 0.0 && beta_c > beta_h, ErrorCode::InvalidArgument,
          "bath temperatures must satisfy beta_c > beta_h >= 0");
  if (delta == 0.0) {
    const double w0 = omega_of_t(*this, 0.0);
    const double wh = omega_of_t(*this, half_period());
    require(w0 != 0.0 || wh != 0.0, ErrorCode::DegenerateHamiltonian, "gap vanishes on a whole stroke");
    require(w0 * wh >= 0.0, ErrorCode::DegenerateHamiltonian,
            "Omega crosses zero inside a stroke while Delta = 0");
  }
}

double omega_of_t(const EngineParams& p, double t) {
  const double slack = 1e-12 * p.period;
  require(t >= -slack && t <= p.period + slack, ErrorCode::DomainError,
          "t = " + std::to_string(t) + " outside [0, T]");
  const double speed = sweep_sign(p) * std::abs(p.v);
  const double half = p.half_period();
  return t <= half ? p.omega0 + speed * t : p.omega0 + speed * (p.period - t);
}

double omega_rate(const EngineParams& p, double t0) {
  const double speed = sweep_sign(p) * std::abs(p.v);
  return t0 < p.half_period() ? speed : -speed;
}

double gap_energy(const EngineParams& p, double t) { return std::hypot(omega_of_t(p, t), p.delta); }

double mixing_angle(const EngineParams& p, double t) {
  const double w = omega_of_t(p, t);
  require(w != 0.0 || p.delta != 0.0, ErrorCode::DegenerateHamiltonian, "Omega = Delta = 0");
  return std::atan2(-w, p.delta);
}

double adiabatic_phase(const EngineParams& p, double t, double t0) {
  const double half = p.half_period();
  const double lo = std::min(t, t0);
  const double hi = std::max(t, t0);
  double phase = 0.0;
  if (lo < half && hi > half) {
    phase = segment_phase(p, lo, half) + segment_phase(p, half, hi);
  } else {
    phase = segment_phase(p, lo, hi);
  }
  return t >= t0 ? phase : -phase;
}

double stroke_start(const EngineParams& p, double t) { return t < p.half_period() ? 0.0 : p.half_period(); }

double stroke_beta(const EngineParams& p, double t0) { return t0 < p.half_period() ? p.beta_c : p.beta_h; }

void set_bath_products(EngineParams& p, double beta_c_e0, double beta_h_ehalf) {
  p.beta_c = beta_c_e0 / gap_energy(p, 0.0);
  p.beta_h = beta_h_ehalf / gap_energy(p, p.half_period());
}

SmoothPlateauCoupling smooth_plateau(double g, double delta_t, double alpha, double period) {
  SmoothPlateauCoupling s;
  s.g = g;
  s.delta_t = delta_t;
  s.alpha = alpha;
  s.period = period;
  s.t_on = (1.0 - delta_t) * period / 4.0;
  s.t_off = s.t_on + delta_t * period / 2.0;
  return s;
}

double plateau_height(const SmoothPlateauCoupling& s) { return 2.0 * s.g / (s.delta_t * s.period); }

double g_of_t(const CouplingSchedule& schedule, double t) {
  if (const auto* s = std::get_if<SmoothPlateauCoupling>(&schedule)) return plateau_value(*s, t);
  if (const auto* s = std::get_if<SampledCoupling>(&schedule)) return sampled_value(*s, t);
  fail(ErrorCode::InvalidVariant, "impulse coupling has no pointwise value");
}

double coupling_integral(const CouplingSchedule& schedule, double a, double b) {
  if (b < a) return -coupling_integral(schedule, b, a);
  if (const auto* s = std::get_if<SmoothPlateauCoupling>(&schedule)) return plateau_integral(*s, a, b);
  if (const auto* s = std::get_if<SampledCoupling>(&schedule)) return sampled_integral(*s, a, b);
  const auto& k = std::get<ImpulseCoupling>(schedule);
  return (k.t1 >= a && k.t1 < b) ? k.g : 0.0;
}

std::vector<double> schedule_breakpoints(const CouplingSchedule& schedule, double a, double b) {
  std::vector<double> points;
  auto add = [&](double t) {
    if (t > a && t < b) points.push_back(t);
  };
  if (const auto* s = std::get_if<SmoothPlateauCoupling>(&schedule)) {
    const double half = 0.5 * s->period;
    // The switching fronts are ~1/alpha wide; bracketing them keeps the
    // quadrature from sampling across a step.
    for (int n = 0; n < 2; ++n) {
      for (double c : {s->t_on + n * half, s->t_off + n * half}) {
        for (double w : {-40.0, -5.0, 0.0, 5.0, 40.0}) add(c + w / s->alpha);
      }
    }
  } else if (const auto* s = std::get_if<SampledCoupling>(&schedule)) {
    for (double t : s->times) add(t);
  } else {
    add(std::get<ImpulseCoupling>(schedule).t1);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

void validate_schedule(const CouplingSchedule& schedule, const EngineParams& p) {
  const double T = p.period;
  if (const auto* s = std::get_if<ImpulseCoupling>(&schedule)) {
    require(std::isfinite(s->g), ErrorCode::InvalidArgument, "impulse strength must be finite");
    require(s->t1 > 0.0 && s->t1 < T && s->t1 != p.half_period(), ErrorCode::InvalidArgument,
            "impulse time must lie strictly inside a stroke");
  } else if (const auto* s = std::get_if<SmoothPlateauCoupling>(&schedule)) {
    require(s->delta_t > 0.0 && s->delta_t < 1.0, ErrorCode::InvalidArgument, "delta_t must lie in (0, 1)");
    require(s->alpha > 0.0, ErrorCode::InvalidArgument, "alpha must be positive");
    require(std::abs(s->period - T) <= 1e-12 * T, ErrorCode::InvalidArgument,
            "plateau period differs from the engine period");
    require(s->t_on >= 0.0 && s->t_on < s->t_off && s->t_off <= p.half_period(), ErrorCode::InvalidArgument,
            "plateau window must satisfy 0 <= t_on < t_off <= T/2");
    const double scale = std::abs(s->g) / (s->delta_t * T);
    require(std::abs(plateau_value(*s, 0.0)) < 1e-6 * scale && std::abs(plateau_value(*s, T)) < 1e-6 * scale,
            ErrorCode::InvalidArgument, "coupling is not switched off at the cycle endpoints");
    require(std::abs(plateau_value(*s, p.half_period())) < 1e-3 * plateau_height(*s), ErrorCode::InvalidArgument,
            "coupling overlaps the thermal reset at T/2");
  } else {
    const auto& sampled = std::get<SampledCoupling>(schedule);
    require(sampled.times.size() >= 2 && sampled.times.size() == sampled.values.size(), ErrorCode::InvalidArgument,
            "sampled coupling needs matching time and value arrays");
    for (std::size_t k = 1; k < sampled.times.size(); ++k) {
      require(sampled.times[k] > sampled.times[k - 1], ErrorCode::InvalidArgument, "sample times must ascend");
    }
    require(sampled.times.front() >= 0.0 && sampled.times.back() <= T, ErrorCode::InvalidArgument,
            "sample times must lie in [0, T]");
  }
}

bool is_impulse(const CouplingSchedule& schedule) { return std::holds_alternative<ImpulseCoupling>(schedule); }

void ExternalSystem::validate() const {
  require(!energies.empty(), ErrorCode::InvalidArgument, "external system has no levels");
  require(energies.front() == 0.0, ErrorCode::InvalidArgument, "ground energy must be zero");
  for (std::size_t i = 1; i < energies.size(); ++i) {
    require(energies[i] >= energies[i - 1], ErrorCode::InvalidArgument, "energies must ascend");
  }
  require(coupling.dim() == dim(), ErrorCode::InvalidSpace, "V_S dimension differs from the spectrum");
  require(coupling.is_hermitian(), ErrorCode::InvalidArgument, "V_S is not Hermitian");
}

ExternalSystem harmonic_system(double omega, Index dim) {
  require(dim >= 2, ErrorCode::InvalidArgument, "oscillator truncation needs dim >= 2");
  require(std::isfinite(omega) && omega > 0.0, ErrorCode::InvalidArgument, "oscillator frequency must be positive");
  std::vector<double> energies(static_cast<std::size_t>(dim));
  CMatrix v = CMatrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    energies[static_cast<std::size_t>(i)] = omega * static_cast<double>(i);
    if (i > 0) {
      v(i, i - 1) = std::sqrt(static_cast<double>(i));
      v(i - 1, i) = v(i, i - 1);
    }
  }
  return ExternalSystem{std::move(energies), DenseOperator(SpaceKind::ho_truncated(dim), std::move(v)),
                        "harmonic"};
}

Complex coupling_element(const ExternalSystem& system, Index i, double t) {
  return system.coupling.matrix(i, 0) * std::polar(1.0, system.energies[static_cast<std::size_t>(i)] * t);
}

double lowest_excitation(const ExternalSystem& system) {
  for (double e : system.energies)
    if (e > 0.0) return e;
  fail(ErrorCode::InvalidArgument, "external system has no excited level");
}

}  // namespace qstat

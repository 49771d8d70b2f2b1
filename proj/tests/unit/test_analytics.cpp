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


#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qstat/analytics.hpp"

using namespace qstat;

namespace {

constexpr double kPi = std::numbers::pi;

EngineParams fig2_engine(int n, double delta) {
  EngineParams p;
  p.n = n;
  p.omega0 = 1.0;
  p.delta = delta;
  p.v = -0.1;
  p.period = 20.0;
  set_bath_products(p, 2.0, 0.25);
  return p;
}

ExternalSystem two_level(double omega) {
  CMatrix v(2, 2);
  v << 0.0, 1.0, 1.0, 0.0;
  return ExternalSystem{{0.0, omega}, DenseOperator(SpaceKind::generic(2), v), "two-level"};
}

// Flat coupling g/T on each half stroke with short linear ramps.
SampledCoupling flat_coupling(double g, double T) {
  const double e = 1e-4 * T;
  const double h = g / T;
  return SampledCoupling{{0.0, e, T / 2 - e, T / 2, T / 2 + e, T - e, T}, {0.0, h, h, 0.0, h, h, 0.0}};
}

// Random smooth schedule: a few Gaussian-ish bumps sampled on a grid and
// forced to zero at 0, T/2 and T.
SampledCoupling random_schedule(testing::Gen& gen, double T) {
  const int pts = 401;
  SampledCoupling s;
  const int bumps = gen.integer(1, 4);
  std::vector<double> c(bumps), w(bumps), a(bumps);
  for (int k = 0; k < bumps; ++k) {
    c[k] = gen.uniform(0.05, 0.95) * T;
    w[k] = gen.uniform(0.02, 0.2) * T;
    a[k] = gen.uniform(-1.0, 1.0) * 0.02 / T;
  }
  for (int i = 0; i < pts; ++i) {
    const double t = T * i / (pts - 1);
    double v = 0.0;
    for (int k = 0; k < bumps; ++k) v += a[k] * std::exp(-0.5 * std::pow((t - c[k]) / w[k], 2));
    const double env = std::sin(2.0 * kPi * t / T);
    s.times.push_back(t);
    s.values.push_back(v * env * env);
  }
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("second moments") {
  for (int n = 1; n <= 12; ++n) {
    const double x = 0.7;
    CHECK(std::abs(second_moment_indist(n, x, -0.5 * kPi) - (0.5 * n * (n + 2.0) - 2.0 * moment_f(n, x))) < 1e-12);
    CHECK(std::abs(second_moment_dist(n, x, -0.5 * kPi) - n) < 1e-12);
  }
  for (double th : {-1.2, -0.3, 0.0, 0.9}) {
    CHECK(std::abs(second_moment_indist(1, 0.4, th) - 1.0) < 1e-14);
    CHECK(std::abs(second_moment_dist(1, 0.4, th) - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(second_moment(Statistics::Fermi, 2, 1.0, 0.0), Error);
}

TEST_CASE("equal-time correlators") {
  for (int n = 1; n <= 8; ++n) {
    const EngineParams p = fig2_engine(n, 0.0);
    const double x = p.beta_c * gap_energy(p, 0.0);
    const CorrelatorValue ci = correlator_indist(p, 3.0, 3.0, 0.0);
    CHECK(std::abs(ci.value - Complex(0.5 * n * (n + 2.0) - 2.0 * moment_f(n, x), 0.0)) < 1e-12);
    CHECK_FALSE(ci.factorized);
    CHECK(std::abs(correlator_dist(p, 3.0, 3.0, 0.0).value - Complex(n, 0.0)) < 1e-12);
  }
  const EngineParams p1 = fig2_engine(1, 0.8);
  for (double t : {1.0, 4.0, 9.0}) CHECK(std::abs(correlator_indist(p1, t, t, 0.0).value - 1.0) < 1e-12);
}

TEST_CASE("indistinguishable correlator against the Dicke matrix oracle") {
  EngineParams p = fig2_engine(3, 0.5);
  const Complex ana = correlator_indist(p, 2.0, 6.5, 0.0).value;
  const Complex ref = testing::matrix_correlator(p, 2.0, 6.5, 0.0, Statistics::Bose);
  CHECK(std::abs(ana - ref) < 1e-10);

  testing::Gen gen(77);
  for (int trial = 0; trial < 40; ++trial) {
    EngineParams q = fig2_engine(gen.integer(1, 6), gen.uniform(0.05, 3.0));
    q.omega0 = gen.uniform(-1.0, 1.5);
    set_bath_products(q, gen.uniform(0.3, 3.0), gen.uniform(0.01, 0.25));
    const double t0 = gen.coin() ? 0.0 : 10.0;
    const double t = t0 + gen.uniform(0.0, 10.0);
    const double tp = t0 + gen.uniform(0.0, 10.0);
    for (Statistics s : {Statistics::Bose, Statistics::Distinguishable}) {
      const Complex a = s == Statistics::Bose ? correlator_indist(q, t, tp, t0).value
                                              : correlator_dist(q, t, tp, t0).value;
      const Complex r = testing::matrix_correlator(q, t, tp, t0, s);
      CHECK(std::abs(a - r) < 1e-9 * (1.0 + std::abs(r)));
    }
  }
}

TEST_CASE("distinguishable correlator against the 2^4 product oracle") {
  const EngineParams p = fig2_engine(4, 0.9);
  const Complex ana = correlator_dist(p, 11.0, 17.0, 10.0).value;
  const Complex ref = testing::matrix_correlator(p, 11.0, 17.0, 10.0, Statistics::Distinguishable);
  CHECK(std::abs(ana - ref) < 1e-10);
}

TEST_CASE("one engine is both statistics") {
  testing::Gen gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    const EngineParams p = fig2_engine(1, gen.uniform(0.0, 4.0));
    const double t0 = gen.coin() ? 0.0 : 10.0;
    const double t = t0 + gen.uniform(0.0, 10.0);
    const double tp = t0 + gen.uniform(0.0, 10.0);
    CHECK(std::abs(correlator_indist(p, t, tp, t0).value - correlator_dist(p, t, tp, t0).value) < 1e-13);
  }
}

TEST_CASE("correlators factorize across the reset") {
  const EngineParams p = fig2_engine(3, 1.1);
  const CorrelatorValue c = correlator_indist(p, 3.0, 14.0, 0.0);
  CHECK(c.factorized);
  const double prod = single_avg(p, 3.0, 0.0, Statistics::Bose) * single_avg(p, 14.0, 10.0, Statistics::Bose);
  CHECK(std::abs(c.value - prod) < 1e-14);
  const CorrelatorValue d = correlator_dist(p, 3.0, 14.0, 0.0);
  CHECK(d.factorized);
  const double prod_d = single_avg(p, 3.0, 0.0, Statistics::Distinguishable) *
                        single_avg(p, 14.0, 10.0, Statistics::Distinguishable);
  CHECK(std::abs(d.value - prod_d) < 1e-14);
}

TEST_CASE("single averages") {
  const EngineParams flat = fig2_engine(4, 0.0);
  CHECK(std::abs(single_avg(flat, 2.0, 0.0, Statistics::Bose)) < 1e-15);
  CHECK(std::abs(single_avg(flat, 2.0, 0.0, Statistics::Distinguishable)) < 1e-15);

  // One thermal spin: magnitude cos(theta) tanh(beta E), pointing against the field.
  const EngineParams one = fig2_engine(1, 1.3);
  const double x = one.beta_c * gap_energy(one, 0.0);
  const double d1 = single_avg(one, 4.0, 0.0, Statistics::Distinguishable);
  CHECK(std::abs(std::abs(d1) - std::cos(mixing_angle(one, 4.0)) * std::tanh(x)) < 1e-14);
  CHECK(std::abs(d1 - testing::matrix_single_avg(one, 4.0, 0.0, Statistics::Distinguishable)) < 1e-12);

  EngineParams p = fig2_engine(3, 1.0);
  p.omega0 = 1.0;
  p.beta_c = 0.7;
  p.beta_h = 0.1;
  const double trace = testing::matrix_single_avg(p, 5.0, 0.0, Statistics::Bose);
  CHECK(std::abs(single_avg(p, 5.0, 0.0, Statistics::Bose, SingleAvgVariant::FirstMoment) - trace) < 1e-12);
  CHECK(std::abs(single_avg(p, 5.0, 0.0, Statistics::Bose, SingleAvgVariant::AsPrinted) - trace) > 0.1);
  const double dist = testing::matrix_single_avg(p, 5.0, 0.0, Statistics::Distinguishable);
  CHECK(std::abs(single_avg(p, 5.0, 0.0, Statistics::Distinguishable) - dist) < 1e-12);
  CHECK_THROWS_AS(single_avg(p, 12.0, 0.0, Statistics::Bose), Error);
}

TEST_CASE("impulse work") {
  const double omega = 2.0 * kPi * 0.05 / 20.0;
  const ExternalSystem ho = harmonic_system(omega, 10);
  const ImpulseCoupling kick{0.01, 3.5};
  for (double delta : {0.0, 1.4, 4.2}) {
    const EngineParams p = fig2_engine(1, delta);
    const WorkRecord wi = impulse_work(p, kick, ho, Statistics::Bose);
    const WorkRecord wd = impulse_work(p, kick, ho, Statistics::Distinguishable);
    CHECK(wi.avg_work == wd.avg_work);
    CHECK(wi.enhancement_ratio.value() == 1.0);
    CHECK(wi.method == WorkMethod::ImpulseClosedForm);
  }
  for (int n = 1; n <= 6; ++n) {
    const WorkRecord w = impulse_work(fig2_engine(n, 0.0), kick, ho, Statistics::Distinguishable);
    CHECK(rel(w.avg_work, omega * 1e-4 * n) < 1e-12);
    CHECK(w.p_excite[2] == 0.0);
    CHECK(std::abs(w.p_excite[0] + w.excitation() - 1.0) < 1e-15);
  }
  // fig2a regime: at least one and monotone in N.
  for (int n = 1; n <= 8; ++n) {
    for (double delta : {0.0, 1.4, 4.2}) {
      const double e = *impulse_work(fig2_engine(n, delta), kick, ho, Statistics::Bose).enhancement_ratio;
      CHECK(e >= 1.0 - 1e-12);
      if (n > 1) {
        const double before = *impulse_work(fig2_engine(n - 1, delta), kick, ho, Statistics::Bose).enhancement_ratio;
        CHECK(e >= before - 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(impulse_work(fig2_engine(2, 0.0), smooth_plateau(0.5, 0.9, 107.1, 20.0), ho, Statistics::Bose),
                  Error);
}

TEST_CASE("amplitudes against brute-force quadrature") {
  const double T = 20.0;
  const ExternalSystem ho = harmonic_system(0.4, 4);
  testing::Gen gen(31);
  for (int trial = 0; trial < 6; ++trial) {
    EngineParams p = fig2_engine(2, gen.uniform(0.0, 2.0));
    p.omega0 = gen.uniform(0.5, 1.5);
    const CouplingSchedule s = trial % 2 ? CouplingSchedule(smooth_plateau(0.3, 0.9, 2142.0 / T, T))
                                         : CouplingSchedule(random_schedule(gen, T));
    for (double t0 : {0.0, 10.0}) {
      const Amplitudes a = compute_amplitudes(p, s, ho, 1, t0);
      auto integrand = [&](int sign, bool cosine) {
        return [&, sign, cosine](double t) {
          const double th = mixing_angle(p, t);
          const Complex base = g_of_t(s, t) * coupling_element(ho, 1, t);
          if (cosine) return -base * std::cos(th);
          return base * std::sin(th) * std::polar(1.0, sign * adiabatic_phase(p, t, t0));
        };
      };
      const int panels = 400000;
      const Complex cp = testing::simpson(integrand(1, false), t0, t0 + 10.0, panels);
      const Complex cm = testing::simpson(integrand(-1, false), t0, t0 + 10.0, panels);
      const Complex d = testing::simpson(integrand(0, true), t0, t0 + 10.0, panels);
      const double scale = std::abs(coupling_integral(s, t0, t0 + 10.0)) + 1e-3 * 0.3;
      CHECK(std::abs(a.c_plus - cp) < 1e-7 * scale);
      CHECK(std::abs(a.c_minus - cm) < 1e-7 * scale);
      CHECK(std::abs(a.d - d) < 1e-7 * scale);
    }
  }
  // Only the first oscillator level couples to the ground state.
  const Amplitudes a2 = compute_amplitudes(fig2_engine(2, 1.0), smooth_plateau(0.3, 0.9, 107.1, T), ho, 2, 0.0);
  CHECK(a2.c_plus == Complex(0.0));
  CHECK(a2.d == Complex(0.0));
  CHECK_THROWS_AS(compute_amplitudes(fig2_engine(2, 1.0), ImpulseCoupling{0.01, 3.5}, ho, 1, 3.0), Error);
}

TEST_CASE("Delta = 0 reduces to the c-amplitude forms") {
  const double T = 20.0;
  const CouplingSchedule s = smooth_plateau(0.01, 0.9, 2142.0 / T, T);
  const ExternalSystem sys = two_level(0.3);
  for (int n : {1, 2, 5}) {
    const EngineParams p = fig2_engine(n, 0.0);
    const Amplitudes cold = compute_amplitudes(p, s, sys, 1, 0.0);
    const Amplitudes hot = compute_amplitudes(p, s, sys, 1, 10.0);
    CHECK(cold.d == Complex(0.0));
    CHECK(hot.d == Complex(0.0));
    double want_i = 0.0, want_d = 0.0;
    const double j = 0.25 * n * (n + 2.0);
    for (const auto& [a, x] : {std::pair{&cold, p.beta_c * gap_energy(p, 0.0)},
                               std::pair{&hot, p.beta_h * gap_energy(p, 10.0)}}) {
      const double f = testing::direct_f(n, x), h = testing::direct_h(n, x), tx = std::tanh(x);
      want_i += std::norm(a->c_plus) * (j - f - h) + std::norm(a->c_minus) * (j - f + h);
      want_d += std::norm(a->c_plus) * 0.5 * n * (1 + tx) + std::norm(a->c_minus) * 0.5 * n * (1 - tx);
    }
    CHECK(rel(general_probability(p, s, sys, Statistics::Bose, 1), want_i) < 1e-10);
    CHECK(rel(general_probability(p, s, sys, Statistics::Distinguishable, 1), want_d) < 1e-10);
  }
}

TEST_CASE("one engine: both statistics agree for any schedule") {
  testing::Gen gen(55);
  const ExternalSystem ho = harmonic_system(0.3, 5);
  for (int trial = 0; trial < 10; ++trial) {
    EngineParams p = fig2_engine(1, gen.uniform(0.0, 3.0));
    set_bath_products(p, gen.uniform(0.5, 3.0), gen.uniform(0.01, 0.4));
    const SampledCoupling s = random_schedule(gen, 20.0);
    const double a = general_probability(p, s, ho, Statistics::Bose, 1);
    const double b = general_probability(p, s, ho, Statistics::Distinguishable, 1);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1e-30, std::abs(b)));
  }
}

TEST_CASE("narrow bump converges to the impulse") {
  const double T = 20.0, g = 0.01, t1 = 3.5, w = T / 2000.0;
  const ExternalSystem ho = harmonic_system(2.0 * kPi * 0.05 / T, 6);
  const SampledCoupling bump{{t1 - w / 2, t1, t1 + w / 2}, {0.0, 2.0 * g / w, 0.0}};
  for (int n : {1, 3, 6}) {
    for (double delta : {0.0, 1.4}) {
      const EngineParams p = fig2_engine(n, delta);
      for (Statistics s : {Statistics::Bose, Statistics::Distinguishable}) {
        const double want = impulse_work(p, ImpulseCoupling{g, t1}, ho, s).p_excite[1];
        CHECK(rel(general_probability(p, bump, ho, s, 1), want) < 1e-3);
      }
    }
  }
}

TEST_CASE("small omega T: d follows the logarithmic form") {
  const double T = 20.0, g = 0.01;
  // The form drops the phase e^{i eps t}, worth eps T/2 on the hot stroke.
  const ExternalSystem sys = two_level(0.01 / T);
  const SampledCoupling flat = flat_coupling(g, T);
  for (double delta : {0.3, 1.0, 2.5}) {
    const EngineParams p = fig2_engine(2, delta);
    auto log_term = [&](double t) {
      const double th = mixing_angle(p, t);
      return std::log(1.0 / std::cos(th) + std::tan(th));
    };
    const double d_log = -g * delta / (p.v * T) * (log_term(10.0) - log_term(0.0));
    const Amplitudes cold = compute_amplitudes(p, flat, sys, 1, 0.0);
    const Amplitudes hot = compute_amplitudes(p, flat, sys, 1, 10.0);
    CHECK(std::abs(cold.d - d_log) < 0.02 * std::abs(d_log));
    CHECK(std::abs(hot.d - d_log) < 0.02 * std::abs(d_log));
    const double cross = (cold.d * std::conj(hot.d)).real();
    CHECK(cross > 0.0);
    CHECK(rel(cross, d_log * d_log) < 0.02);
  }
}

TEST_CASE("large omega T: cross term follows the oscillating form") {
  const double T = 20.0, g = 0.01, omega = 50.0 / T;
  const ExternalSystem sys = two_level(omega);
  const SampledCoupling flat = flat_coupling(g, T);
  const EngineParams p = fig2_engine(2, 0.05);
  const double w0 = omega_of_t(p, 0.0), wh = omega_of_t(p, 10.0), d2 = p.delta * p.delta;
  const double want = g * g * d2 / (omega * omega * T * T) *
                      (2.0 * std::cos(omega * T / 2) / std::sqrt((w0 * w0 + d2) * (wh * wh + d2)) -
                       std::cos(omega * T) / (w0 * w0 + d2) - 1.0 / (wh * wh + d2));
  const Amplitudes cold = compute_amplitudes(p, flat, sys, 1, 0.0);
  const Amplitudes hot = compute_amplitudes(p, flat, sys, 1, 10.0);
  const double cross = (cold.d * std::conj(hot.d)).real();
  CHECK(rel(cross, want) < 0.05);
}

TEST_CASE("work records") {
  const std::vector<double> e{0.0, 1.0, 2.0};
  const WorkRecord r = make_work_record(e, {0.0, 0.05, 0.01}, Statistics::Bose, WorkMethod::GeneralPerturbative);
  CHECK(r.p_excite[0] == doctest::Approx(0.94));
  CHECK(r.avg_work == doctest::Approx(0.07));
  CHECK_FALSE(r.perturbative_warning);
  CHECK(make_work_record(e, {0.0, 0.2, 0.0}, Statistics::Bose, WorkMethod::ImpulseClosedForm).perturbative_warning);
  try {
    make_work_record(e, {0.0, 0.4, 0.2}, Statistics::Bose, WorkMethod::GeneralPerturbative);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NumericalFailure);
  }
  CHECK_NOTHROW(make_work_record(e, {0.0, 0.4, 0.2}, Statistics::Bose, WorkMethod::ExactNumerical));
  CHECK_THROWS_AS(make_work_record(e, {0.0, 0.1}, Statistics::Bose, WorkMethod::ExactNumerical), Error);
}

TEST_CASE("general work fills the enhancement ratio") {
  const double T = 20.0;
  const EngineParams p = fig2_engine(3, 1.4);
  const CouplingSchedule s = smooth_plateau(0.01, 0.9, 2142.0 / T, T);
  const ExternalSystem ho = harmonic_system(2.0 * kPi * 0.05 / T, 6);
  const WorkRecord wi = general_work(p, s, ho, Statistics::Bose);
  const WorkRecord wd = general_work(p, s, ho, Statistics::Distinguishable);
  CHECK(wi.method == WorkMethod::GeneralPerturbative);
  CHECK(rel(*wi.enhancement_ratio, wi.avg_work / wd.avg_work) < 1e-12);
  CHECK(rel(*wd.enhancement_ratio, *wi.enhancement_ratio) < 1e-12);
  CHECK(analytic_work(p, s, ho, Statistics::Bose).avg_work == wi.avg_work);
  CHECK(analytic_work(p, ImpulseCoupling{0.01, 3.5}, ho, Statistics::Bose).method == WorkMethod::ImpulseClosedForm);
  CHECK_THROWS_AS(general_work(p, s, ho, Statistics::Fermi), Error);
}

TEST_CASE("enhancement regions") {
  RegionSpec spec;
  spec.base = fig2_engine(1, 0.0);
  spec.delta_over_omega0 = {0.0, 1.0, 2.0, 3.0, 4.0};
  for (int k = 0; k < 24; ++k) spec.omega_t.push_back(0.1 + k * (10.0 * kPi - 0.1) / 23.0);
  spec.ns = {2, 20};
  const auto cells = enhancement_region(spec, 2);
  REQUIRE(cells.size() == 5 * 24 * 2);
  bool n2_all = true, zero_all = true, n20_gap = false;
  for (const auto& c : cells) {
    if (c.n == 2) n2_all = n2_all && c.enhanced;
    if (c.delta_over_omega0 == 0.0) zero_all = zero_all && c.enhanced;
    if (c.n == 20 && c.omega_t > kPi && !c.enhanced) n20_gap = true;
  }
  CHECK(n2_all);
  CHECK(zero_all);
  CHECK(n20_gap);
  // Row-major order with N fastest.
  CHECK(cells[1].n == 20);
  CHECK(cells[2].omega_t == spec.omega_t[1]);
  // Threading does not change the result.
  const auto serial = enhancement_region(spec, 1);
  for (std::size_t i = 0; i < cells.size(); ++i) CHECK(serial[i].ratio == cells[i].ratio);
}

TEST_CASE("asymptotics") {
  const AsymptoticReport r = asymptotic_checks(fig2_engine(1, 0.0), {1, 2, 200});
  CHECK(r.x == doctest::Approx(2.0));
  CHECK(rel(r.rows[2].exact, r.rows[2].large_n) < 1e-3);
  CHECK(std::abs(r.rows[0].exact - 1.0) < 1e-14);
  CHECK(std::abs(small_n_f1(1e-6) + small_n_f2(1e-6) - 1.0) < 1e-9);
  CHECK(small_n_f1(0.0) + small_n_f2(0.0) == doctest::Approx(1.0));
  // Zero temperature: slope -> 1, the distinguishable value.
  CHECK(std::abs(large_n_second_moment(1000, 40.0) - 1000.0) < 1e-9);
  CHECK(rel(second_moment_indist(500, 2.0, -kPi / 2) - second_moment_indist(499, 2.0, -kPi / 2),
            1.0 / std::tanh(2.0)) < 1e-3);
  CHECK_THROWS_AS(asymptotic_checks(fig2_engine(1, 0.3), {1}), Error);
}

TEST_CASE("inequality battery") {
  std::vector<double> grid;
  for (int k = 0; k < 40; ++k) grid.push_back(std::pow(10.0, -3.0 + 5.0 * k / 39.0));
  const InequalityReport rep = verify_inequalities(60, grid);
  CHECK(rep.checks == 60u * 40u * 40u);
  CHECK(rep.n1_equality_error < 1e-12);
  CHECK(rep.worst.worst() >= -1e-12);

  const InequalityMargins two = inequality_margins(2, 0.5, 0.5);
  CHECK(two.upper_f > 0.0);
  CHECK(two.variance_dist > 0.0);
  CHECK(two.ladder_plus > 0.0);
  CHECK(two.ladder_minus > 0.0);
  CHECK(two.cross > 0.0);

  // x -> 0: 4 f -> N(N+2)/3 against N.
  for (int n = 2; n <= 10; ++n) {
    CHECK(std::abs(inequality_margins(n, 1e-9, 1.0).variance_dist - n * (n - 1.0) / 3.0) < 1e-8);
  }
}

TEST_CASE("inequality margins from direct sums, random draws") {
  testing::Gen gen(4242);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = gen.integer(1, 60);
    const double x = gen.log_uniform(1e-3, 50.0), y = gen.log_uniform(1e-3, 50.0);
    const double f = testing::direct_f(n, x), h = testing::direct_h(n, x), hy = testing::direct_h(n, y);
    const double tx = std::tanh(x), ty = std::tanh(y), j = 0.25 * n * (n + 2.0);
    const InequalityMargins m = inequality_margins(n, x, y);
    const double tol = 1e-11 * std::max(1.0, 0.25 * n * n);
    CHECK(std::abs(m.upper_f - (0.25 * n * n - f)) < tol);
    CHECK(std::abs(m.variance_dist - (4.0 * f - n - n * (n - 1.0) * tx * tx)) < tol);
    CHECK(std::abs(m.ladder_plus - (j - f - h - 0.5 * n * (1 + tx))) < tol);
    CHECK(std::abs(m.ladder_minus - (j - f + h - 0.5 * n * (1 - tx))) < tol);
    CHECK(std::abs(m.cross - (4.0 * h * hy - double(n) * n * tx * ty)) < tol);
    CHECK(m.worst() >= -tol);
  }
}

}  // TEST_SUITE

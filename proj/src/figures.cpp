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


#include "qstat/figures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "qstat/parallel.hpp"

namespace qstat {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) { return format_number(v); }

FigureAssertion check(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok, std::move(detail)};
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Json engine_section(int n, double delta) {
  return Json{{"N", n},           {"omega0", 1.0},   {"delta", delta}, {"v", -0.1},
              {"T", 20.0},        {"beta_c_E0", 2.0}, {"beta_h_EhalfT", 0.25}};
}

Json impulse_preset() {
  return Json{{"engine", engine_section(1, 0.0)},
              {"coupling", {{"kind", "impulse"}, {"g", 0.01}, {"t1_over_half_period", 0.35}}},
              {"system", {{"kind", "harmonic"}, {"omega_T", 2.0 * kPi * 0.05}, {"dim", 12}}}};
}

Json plateau_preset() {
  return Json{{"engine", engine_section(1, 0.0)},
              {"coupling", {{"kind", "plateau"}, {"g", 0.5}, {"delta_t", 0.9}, {"alpha_T", 2142.0}}},
              {"system", {{"kind", "harmonic"}, {"omega_T", 2.0 * kPi * 0.05}, {"dim", 16}}}};
}

Json fermi_preset() {
  return Json{{"engine",
               {{"N", 2},
                {"omega0", 0.0},
                {"delta", 1.0},
                {"v", -0.5},
                {"T", 20.0},
                {"beta_c_E0", 1.0},
                {"beta_h_EhalfT", 0.125},
                {"statistics", "fermi"}}},
              {"coupling", {{"kind", "plateau"}, {"g", 0.5}, {"delta_t", 0.98}, {"alpha_T", 2000.0}}},
              {"system", {{"kind", "harmonic"}, {"omega_T", 2.0 * kPi * 0.05}, {"dim", 24}}},
              {"fermi", {{"omega_trap", 1.0}, {"beta_com_omega", 4.0}}}};
}

RunConfig preset_with(const Json& base, int n, double delta) {
  Json doc = base;
  doc["engine"]["N"] = n;
  doc["engine"]["delta"] = delta;
  return parse_run_config(doc);
}

double work(const RunConfig& c, Statistics s, bool numeric) {
  return numeric ? run_cycle(c.engine, c.schedule, c.system, s, c.propagator).work.avg_work
                 : analytic_work(c.engine, c.schedule, c.system, s).avg_work;
}

FigureReport fig2a(const FigureOptions& o) {
  FigureReport r;
  r.columns = {"N", "delta_over_omega0", "E_ratio_analytic", "E_ratio_numeric"};
  const std::vector<double> deltas{4.2, 1.4, 0.0};
  struct Cell {
    int n;
    double delta;
    double ana = 0.0;
    double numeric = std::numeric_limits<double>::quiet_NaN();
  };
  std::vector<Cell> cells;
  for (double d : deltas)
    for (int n = 1; n <= 8; ++n) cells.push_back({n, d});
  const Json base = impulse_preset();
  parallel_for(cells.size(), resolve_threads(o.threads), [&](std::size_t i) {
    Cell& c = cells[i];
    const RunConfig cfg = preset_with(base, c.n, c.delta);
    c.ana = work(cfg, Statistics::Bose, false) / work(cfg, Statistics::Distinguishable, false);
    if (!o.analytic_only) c.numeric = work(cfg, Statistics::Bose, true) / work(cfg, Statistics::Distinguishable, true);
  });
  double worst_low = kInfinity, worst_n1 = 0.0, worst_rel = 0.0;
  for (const auto& c : cells) {
    r.rows.push_back({std::to_string(c.n), num(c.delta), num(c.ana), num(c.numeric)});
    worst_low = std::min(worst_low, c.ana - 1.0);
    if (c.n == 1) worst_n1 = std::max(worst_n1, std::abs(c.ana - 1.0));
    if (!o.analytic_only) worst_rel = std::max(worst_rel, std::abs(c.numeric / c.ana - 1.0));
  }
  r.assertions.push_back(check("E_analytic >= 1", worst_low >= -1e-12, "min E - 1 = " + fmt(worst_low)));
  r.assertions.push_back(check("E(N=1) = 1", worst_n1 <= 1e-12, "max |E - 1| = " + fmt(worst_n1)));
  if (!o.analytic_only) {
    r.assertions.push_back(
        check("numeric E within 2% of analytic", worst_rel < 0.02, "max relative difference " + fmt(worst_rel)));
  }
  return r;
}

FigureReport fig2b(const FigureOptions&) {
  FigureReport r;
  r.columns = {"N", "beta_c_E0", "w_ratio", "sqrt_ratio"};
  std::vector<double> betas{0.15, 0.2};
  for (int k = 1; k <= 16; ++k) betas.push_back(0.25 * k);
  Json base = impulse_preset();
  base["engine"]["delta"] = 0.0;
  double worst_r2 = 1.0;
  int fits = 0;
  for (double b : betas) {
    base["engine"]["beta_c_E0"] = b;
    std::vector<double> ns, roots;
    double w1 = 0.0;
    for (int n = 1; n <= 40; ++n) {
      const RunConfig c = preset_with(base, n, 0.0);
      const double w = analytic_work(c.engine, c.schedule, c.system, Statistics::Bose).avg_work;
      if (n == 1) w1 = w;
      r.rows.push_back({std::to_string(n), num(b), num(w / w1), num(std::sqrt(w / w1))});
      // Delta = 0 makes E_0 = Omega(0), so the region is N beta_c E_0 <= 1.
      if (n * b <= 1.0 + 1e-12) {
        ns.push_back(n);
        roots.push_back(std::sqrt(w / w1));
      }
    }
    if (ns.size() >= 3) {
      worst_r2 = std::min(worst_r2, linear_r2(ns, roots));
      ++fits;
    }
  }
  r.assertions.push_back(check("sqrt ratio linear in N where N beta_c Omega(0) <= 1", fits > 0 && worst_r2 > 0.99,
                               std::to_string(fits) + " columns, min R^2 = " + fmt(worst_r2)));
  double worst_slope = 0.0;
  for (double b : betas) {
    const double slope = second_moment_indist(500, b, -0.5 * kPi) - second_moment_indist(499, b, -0.5 * kPi);
    worst_slope = std::max(worst_slope, std::abs(slope / (1.0 / std::tanh(b)) - 1.0));
  }
  r.assertions.push_back(check("large-N slope -> coth(beta_c E_0) within 0.1% at N = 500", worst_slope < 1e-3,
                               "max relative deviation " + fmt(worst_slope)));
  return r;
}

FigureReport fig3(const FigureOptions& o, bool with_dist) {
  FigureReport r;
  r.columns = with_dist ? std::vector<std::string>{"N", "w_indist", "w_dist", "E_ratio"}
                        : std::vector<std::string>{"N", "w_indist", "sqrt_ratio"};
  const int n_max = 6;
  std::vector<double> wi(n_max), wd(n_max);
  const Json base = plateau_preset();
  std::vector<std::pair<int, Statistics>> jobs;
  for (int n = 1; n <= n_max; ++n) {
    jobs.emplace_back(n, Statistics::Bose);
    if (with_dist) jobs.emplace_back(n, Statistics::Distinguishable);
  }
  parallel_for(jobs.size(), resolve_threads(o.threads), [&](std::size_t i) {
    const auto [n, s] = jobs[i];
    const double w = work(preset_with(base, n, 0.0), s, true);
    (s == Statistics::Bose ? wi : wd)[static_cast<std::size_t>(n - 1)] = w;
  });
  std::vector<double> ns, roots;
  bool monotone = true, enhanced = true;
  double min_e = kInfinity;
  for (int n = 1; n <= n_max; ++n) {
    const auto k = static_cast<std::size_t>(n - 1);
    const double root = std::sqrt(wi[k] / wi[0]);
    ns.push_back(n);
    roots.push_back(root);
    if (k > 0 && root <= roots[k - 1]) monotone = false;
    if (with_dist) {
      const double e = wi[k] / wd[k];
      r.rows.push_back({std::to_string(n), num(wi[k]), num(wd[k]), num(e)});
      if (n >= 2) {
        min_e = std::min(min_e, e);
        enhanced = enhanced && e > 1.0;
      }
    } else {
      r.rows.push_back({std::to_string(n), num(wi[k]), num(root)});
    }
  }
  if (with_dist) {
    r.assertions.push_back(check("E > 1 for N >= 2", enhanced, "min E = " + fmt(min_e)));
    r.assertions.push_back(check("E(N=1) = 1", std::abs(wi[0] / wd[0] - 1.0) < 1e-10,
                                 "E(1) - 1 = " + fmt(wi[0] / wd[0] - 1.0)));
  } else {
    r.assertions.push_back(check("sqrt ratio increases with N", monotone, ""));
    const double r2 = linear_r2(ns, roots);
    r.assertions.push_back(check("sqrt ratio close to linear for small N", r2 > 0.99, "R^2 = " + fmt(r2)));
  }
  return r;
}

FigureReport fig4(const FigureOptions& o, bool even) {
  FigureReport r;
  r.columns = {"N", "beta_com_omega", "lambda", "lambda_asymptotic", "method"};
  const std::vector<int> ns = even ? std::vector<int>{2, 4} : std::vector<int>{3, 5};
  std::vector<double> bs;
  for (int k = 0; k <= 7; ++k) bs.push_back(2.5 + 0.5 * k);
  const RunConfig base = parse_run_config(fermi_preset());

  std::vector<std::vector<double>> table;
  if (!o.analytic_only) {
    table = active_engine_probabilities(base.engine, base.schedule, base.system, base.propagator, ns.back(),
                                        o.threads);
  }
  double worst_law = 0.0, worst_low = 0.0, worst_numeric = 0.0;
  for (int n : ns) {
    for (double b : bs) {
      FermiEnsemble ens = base.fermi;
      ens.n = n;
      ens.engine.n = n;
      ens.beta_com = b / ens.omega_trap;
      const auto configs = enumerate_configs(ens);
      double f = 0.0;
      for (const auto& c : configs) f += c.weight * c.active;
      const double asym = fermi_f_asymptotic(n, b);
      r.rows.push_back({std::to_string(n), num(b), num(f), num(asym), "enumeration"});
      const double dev = even ? std::abs(f / asym - 1.0) : std::abs((f - 1.0) / (asym - 1.0) - 1.0);
      if (b >= 4.0) worst_law = std::max(worst_law, dev);
      if (b == 2.5 && n == ns.front()) worst_low = dev;
      if (!o.analytic_only) {
        const auto out = combine_outcoupled(configs, table, base.system);
        const double lam = out.work.enhancement_ratio.value_or(std::numeric_limits<double>::quiet_NaN());
        r.rows.push_back({std::to_string(n), num(b), num(lam), num(asym), "outcoupled"});
        if (b == 4.0) worst_numeric = std::max(worst_numeric, std::abs(lam / f - 1.0));
      }
    }
  }
  const double law_tol = even ? 0.1 : 0.2;
  r.assertions.push_back(check("parity law at beta_COM omega_trap in [4, 6]", worst_law < law_tol,
                               "max relative deviation " + fmt(worst_law)));
  if (even) {
    r.assertions.push_back(check("N = 2 within 20% of the law at beta_COM omega_trap = 2.5", worst_low < 0.2,
                                 "relative deviation " + fmt(worst_low)));
  }
  if (!o.analytic_only) {
    r.assertions.push_back(check("outcoupled lambda within 10% of f_N at beta_COM omega_trap = 4",
                                 worst_numeric < 0.1, "max relative deviation " + fmt(worst_numeric)));
  }
  return r;
}

RegionSpec figs1_spec() {
  RegionSpec spec;
  spec.base.omega0 = 1.0;
  spec.base.v = -0.1;
  spec.base.period = 20.0;
  for (int k = 0; k <= 16; ++k) spec.delta_over_omega0.push_back(0.25 * k);
  const int count = 40;
  for (int k = 0; k < count; ++k) spec.omega_t.push_back(0.1 + (10.0 * kPi - 0.1) * k / (count - 1));
  spec.ns = {2, 5, 10, 15, 20};
  return spec;
}

FigureReport figs1(const FigureOptions& o) {
  FigureReport r;
  r.columns = {"delta_over_omega0", "omega_T", "N", "enhanced", "ratio"};
  const RegionSpec spec = figs1_spec();
  const auto cells = enhancement_region(spec, resolve_threads(o.threads));
  bool n2 = true, column = true, hole = false;
  for (const auto& c : cells) {
    r.rows.push_back({num(c.delta_over_omega0), num(c.omega_t), std::to_string(c.n), c.enhanced ? "1" : "0",
                      num(c.ratio)});
    if (c.n == 2) n2 = n2 && c.enhanced;
    if (c.delta_over_omega0 == 0.0) column = column && c.enhanced;
    if (c.n == 20 && c.omega_t > kPi && !c.enhanced) hole = true;
  }
  r.assertions.push_back(check("N = 2 plane entirely enhanced", n2, ""));
  r.assertions.push_back(check("Delta = 0 column enhanced for every N", column, ""));
  r.assertions.push_back(check("N = 20 has a non-enhanced cell at omega T > pi", hole, ""));
  return r;
}

}  // namespace

bool FigureReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.passed; });
}

std::string FigureReport::csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig2a", "fig2b", "fig3a", "fig3b", "fig4even", "fig4odd", "figS1"};
  return ids;
}

Json figure_preset(std::string_view id) {
  if (id == "fig2a") return impulse_preset();
  if (id == "fig2b") {
    Json doc = impulse_preset();
    doc["engine"]["delta"] = 0.0;
    return doc;
  }
  if (id == "fig3a" || id == "fig3b") return plateau_preset();
  if (id == "fig4even" || id == "fig4odd") return fermi_preset();
  if (id == "figS1") {
    Json doc = impulse_preset();
    doc["coupling"] = Json{{"kind", "plateau"}, {"g", 0.01}, {"delta_t", 0.9}, {"alpha_T", 2142.0}};
    doc["system"] = Json{{"kind", "levels"}, {"energies", {0.0, 2.0 * kPi * 0.05 / 20.0}},
                         {"coupling", {{0.0, 1.0}, {1.0, 0.0}}}};
    return doc;
  }
  fail(ErrorCode::InvalidArgument, "unknown figure '" + std::string(id) + "'");
}

FigureReport run_figure(std::string_view id, const FigureOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  FigureReport r;
  if (id == "fig2a") {
    r = fig2a(options);
  } else if (id == "fig2b") {
    r = fig2b(options);
  } else if (id == "fig3a") {
    r = fig3(options, false);
  } else if (id == "fig3b") {
    r = fig3(options, true);
  } else if (id == "fig4even") {
    r = fig4(options, true);
  } else if (id == "fig4odd") {
    r = fig4(options, false);
  } else if (id == "figS1") {
    r = figs1(options);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown figure '" + std::string(id) + "'");
  }
  r.id = std::string(id);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double linear_r2(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument, "need at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0.0) return 1.0;
  return sxy * sxy / (sxx * syy);
}

std::vector<FigureAssertion> run_verify(std::uint64_t seed, int threads) {
  std::vector<FigureAssertion> out;
  std::mt19937_64 rng(seed);

  // Closed-form moments against direct Boltzmann sums.
  {
    double worst = 0.0;
    for (int n = 1; n <= 60; ++n) {
      for (double x : {1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 50.0}) {
        double z = 0.0, s1 = 0.0, s2 = 0.0;
        for (int k = 0; k <= n; ++k) {
          const double m = k - 0.5 * n;
          const double w = std::exp(-2.0 * x * k);
          z += w;
          s1 += w * m;
          s2 += w * m * m;
        }
        worst = std::max({worst, std::abs(moment_f(n, x) - s2 / z), std::abs(moment_h(n, x) - s1 / z)});
      }
    }
    out.push_back(check("moments match direct sums", worst < 1e-12, "max error " + fmt(worst)));
  }

  // Inequality battery on a grid and at random points.
  {
    std::vector<double> grid;
    for (int k = 0; k < 40; ++k) grid.push_back(std::pow(10.0, -3.0 + 5.0 * k / 39.0));
    try {
      const InequalityReport rep = verify_inequalities(60, grid);
      out.push_back(check("inequalities on the 60 x 40 grid", true, std::to_string(rep.checks) + " checks"));
      out.push_back(check("N = 1 equality cases", rep.n1_equality_error <= 1e-12,
                          "max error " + fmt(rep.n1_equality_error)));
    } catch (const Error& e) {
      out.push_back(check("inequalities on the 60 x 40 grid", false, e.what()));
    }
    std::uniform_int_distribution<int> pick_n(1, 60);
    std::uniform_real_distribution<double> pick_log(-3.0, 2.0);
    double worst = kInfinity;
    for (int k = 0; k < 10000; ++k) {
      const int n = pick_n(rng);
      const double x = std::pow(10.0, pick_log(rng));
      const double y = std::pow(10.0, pick_log(rng));
      const double scale = std::max(1.0, 0.25 * n * n);
      worst = std::min(worst, inequality_margins(n, x, y).worst() / scale);
    }
    out.push_back(check("inequalities at 10^4 random points", worst >= -1e-12, "min scaled margin " + fmt(worst)));
  }

  // Delta = 0 dominance for random spectra and plateau schedules.
  {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = kInfinity;
    for (int trial = 0; trial < 50; ++trial) {
      EngineParams p;
      p.n = 1 + static_cast<int>(u(rng) * 12);
      p.delta = 0.0;
      p.omega0 = 0.5 + u(rng);
      set_bath_products(p, 0.5 + 3.0 * u(rng), 0.1 + 0.3 * u(rng));
      const Index dim = 2 + static_cast<Index>(u(rng) * 4);
      std::vector<double> e{0.0};
      for (Index i = 1; i < dim; ++i) e.push_back(e.back() + 2.0 * u(rng));
      CMatrix v = CMatrix::Zero(dim, dim);
      for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < i; ++j) {
          v(i, j) = Complex(u(rng) - 0.5, u(rng) - 0.5);
          v(j, i) = std::conj(v(i, j));
        }
      const ExternalSystem sys{e, DenseOperator(SpaceKind::generic(dim), v), "random"};
      const CouplingSchedule sched = smooth_plateau(0.01, 0.3 + 0.6 * u(rng), (500.0 + 2000.0 * u(rng)) / p.period, p.period);
      for (Index i = 1; i < dim; ++i) {
        const Amplitudes c = compute_amplitudes(p, sched, sys, i, 0.0);
        const Amplitudes h = compute_amplitudes(p, sched, sys, i, p.half_period());
        const double pi = probability_from_amplitudes(p, c, h, Statistics::Bose);
        const double pd = probability_from_amplitudes(p, c, h, Statistics::Distinguishable);
        worst = std::min(worst, (pi - pd) / std::max(pd, 1e-300));
      }
    }
    out.push_back(check("Delta = 0: p_i(indist) >= p_i(dist)", worst >= -1e-12, "min relative gap " + fmt(worst)));
  }

  // Fermionic parity law and bath independence.
  {
    double worst_even = 0.0, worst_odd = 0.0, worst_lambda = 0.0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 2; n <= 5; ++n) {
      for (double b : {4.0, 5.0, 6.0}) {
        FermiEnsemble ens;
        ens.n = n;
        ens.engine.n = n;
        ens.beta_com = b;
        const double f = fermi_f(ens);
        if (n % 2 == 0) {
          worst_even = std::max(worst_even, std::abs(f / fermi_f_asymptotic(n, b) - 1.0));
        } else {
          worst_odd = std::max(worst_odd, std::abs((f - 1.0) / (fermi_f_asymptotic(n, b) - 1.0) - 1.0));
        }
        FermiEnsemble one = ens;
        one.n = 1;
        one.engine.n = 1;
        for (int draw = 0; draw < 4; ++draw) {
          ens.engine.beta_c = 1.0 + 3.0 * u(rng);
          ens.engine.beta_h = 0.5 * u(rng) * ens.engine.beta_c;
          one.engine = ens.engine;
          const double lam = fermi_work(ens).avg_work / fermi_work(one).avg_work;
          worst_lambda = std::max(worst_lambda, std::abs(lam / f - 1.0));
        }
      }
    }
    out.push_back(check("even-N parity law within 10%", worst_even < 0.1, "max deviation " + fmt(worst_even)));
    out.push_back(check("odd-N parity law within 20%", worst_odd < 0.2, "max deviation " + fmt(worst_odd)));
    out.push_back(check("lambda independent of the baths", worst_lambda < 1e-12, "max deviation " + fmt(worst_lambda)));
  }

  // Exact propagation: N = 1 Dicke and product spaces coincide; weak impulse
  // matches the closed form.
  {
    const RunConfig c = preset_with(impulse_preset(), 1, 1.4);
    const double wb = work(c, Statistics::Bose, true);
    const double wd = work(c, Statistics::Distinguishable, true);
    out.push_back(check("N = 1 bose and distinguishable runs agree", std::abs(wb - wd) <= 1e-10 * std::abs(wb),
                        "difference " + fmt(wb - wd)));
    const RunConfig c3 = preset_with(impulse_preset(), 3, 1.4);
    const double rel = std::abs(work(c3, Statistics::Bose, true) / work(c3, Statistics::Bose, false) - 1.0);
    out.push_back(check("weak impulse: exact run within 2% of closed form", rel < 0.02, "relative difference " + fmt(rel)));
  }

  // Enhancement map corners.
  {
    RegionSpec spec = figs1_spec();
    spec.ns = {2};
    spec.delta_over_omega0 = {0.0, 2.0, 4.0};
    spec.omega_t = {0.1, 5.0, 10.0 * kPi};
    const auto cells = enhancement_region(spec, resolve_threads(threads));
    const bool all = std::all_of(cells.begin(), cells.end(), [](const RegionCell& c) { return c.enhanced; });
    out.push_back(check("N = 2 enhanced on a coarse region grid", all, ""));
  }
  return out;
}

}  // namespace qstat

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


// Command-line front end. Exit codes: 0 success, 1 failed assertion or run,
// 2 usage or configuration error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qstat/figures.hpp"
#include "qstat/parallel.hpp"

namespace {

using qstat::Json;

struct Common {
  std::string config;
  std::string out;
  int threads = 0;
  std::string method = "analytic";
  std::uint64_t seed = 0;
};

struct Overrides {
  std::optional<int> n;
  std::optional<double> delta, omega0, beta_c_e0, beta_h_ehalf, g;
  std::optional<std::string> statistics;

  void add(CLI::App* app) {
    app->add_option("--N", n, "number of engines");
    app->add_option("--delta", delta, "Delta");
    app->add_option("--omega0", omega0, "Omega(0)");
    app->add_option("--beta-c-E0", beta_c_e0, "beta_c E_0");
    app->add_option("--beta-h-EhalfT", beta_h_ehalf, "beta_h E_{T/2}");
    app->add_option("--g", g, "coupling strength");
    app->add_option("--statistics", statistics, "bose, distinguishable or fermi");
  }

  Json apply(Json doc) const {
    if (n) doc = qstat::with_parameter(doc, "engine.N", *n);
    if (delta) doc = qstat::with_parameter(doc, "engine.delta", *delta);
    if (omega0) doc = qstat::with_parameter(doc, "engine.omega0", *omega0);
    if (beta_c_e0) doc = qstat::with_parameter(doc, "engine.beta_c_E0", *beta_c_e0);
    if (beta_h_ehalf) doc = qstat::with_parameter(doc, "engine.beta_h_EhalfT", *beta_h_ehalf);
    if (g) doc = qstat::with_parameter(doc, "coupling.g", *g);
    if (statistics) doc["engine"]["statistics"] = *statistics;
    return doc;
  }
};

Json load(const Common& c, const Json& fallback) {
  return c.config.empty() ? fallback : qstat::load_json_file(c.config);
}

void emit(const Common& c, const std::string& file, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    qstat::write_text_file(c.out + "/" + file, text);
    std::cerr << "wrote " << c.out << "/" << file << "\n";
  }
}

int report(const std::vector<qstat::FigureAssertion>& checks) {
  bool ok = true;
  for (const auto& a : checks) {
    std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << (a.detail.empty() ? "" : "  (" + a.detail + ")") << "\n";
    ok = ok && a.passed;
  }
  return ok ? 0 : 1;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      qstat::fail(qstat::ErrorCode::ConfigError, "cannot read '" + item + "' as a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective work output of quantum Otto engines"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config, "JSON configuration file");
  app.add_option("--out", common.out, "output directory");
  app.add_option("--threads", common.threads, "worker threads (default: QSTAT_THREADS or 1)");
  app.add_option("--method", common.method, "analytic, numerical or both")
      ->check(CLI::IsMember({"analytic", "numerical", "both"}));
  app.add_option("--seed", common.seed, "seed for randomized checks");

  Overrides over;
  auto* analytic = app.add_subcommand("analytic", "closed-form work record");
  over.add(analytic);
  auto* evolve = app.add_subcommand("evolve", "exact propagation of one cycle");
  Overrides over_evolve;
  over_evolve.add(evolve);
  bool trace = false;
  evolve->add_flag("--trace", trace, "write <out>/trace.csv");

  auto* fermi = app.add_subcommand("fermi", "fermionic work ratio tables");
  std::string fermi_ns = "2,3,4,5";
  std::string fermi_bs = "2.5,3,3.5,4,4.5,5,5.5,6";
  fermi->add_option("--Ns", fermi_ns, "comma-separated N values");
  fermi->add_option("--beta-com-omega", fermi_bs, "comma-separated beta_COM omega_trap values");

  auto* region = app.add_subcommand("region", "enhancement map over Delta and omega T");
  std::string region_ns = "2,5,10,15,20";
  region->add_option("--Ns", region_ns, "comma-separated N values");

  auto* figure = app.add_subcommand("figure", "regenerate figure data and check its assertions");
  std::string figure_id;
  bool analytic_only = false;
  figure->add_option("id", figure_id, "figure id")->required()->check(CLI::IsMember(qstat::figure_ids()));
  figure->add_flag("--analytic-only", analytic_only, "skip exact propagation");

  auto* verify = app.add_subcommand("verify", "oracle and inequality battery");
  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep from the config's sweep section");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const int threads = qstat::resolve_threads(common.threads);
  try {
    if (analytic->parsed()) {
      const qstat::RunConfig c = qstat::parse_run_config(over.apply(load(common, qstat::figure_preset("fig2a"))));
      qstat::WorkRecord r = c.engine.statistics == qstat::Statistics::Fermi
                                ? qstat::fermi_work(c.fermi)
                                : qstat::analytic_work(c.engine, c.schedule, c.system, c.engine.statistics);
      emit(common, "result.json", qstat::to_json(r).dump(2) + "\n");
      return 0;
    }
    if (evolve->parsed()) {
      qstat::RunConfig c = qstat::parse_run_config(over_evolve.apply(load(common, qstat::figure_preset("fig2a"))));
      std::string rows = "t,tr_rho,leakage,H_S\n";
      if (trace) {
        if (common.out.empty()) qstat::fail(qstat::ErrorCode::ConfigError, "--trace needs --out");
        c.propagator.trace = [&](const qstat::TraceSample& s) {
          rows += qstat::format_number(s.t) + "," + qstat::format_number(s.trace) + "," +
                  qstat::format_number(s.leakage) + "," + qstat::format_number(s.system_energy) + "\n";
        };
      }
      const auto r = qstat::run_cycle(c.engine, c.schedule, c.system, c.engine.statistics, c.propagator);
      emit(common, "result.json", qstat::to_json(r).dump(2) + "\n");
      if (trace) qstat::write_text_file(common.out + "/trace.csv", rows);
      return 0;
    }
    if (fermi->parsed()) {
      const qstat::RunConfig base = qstat::parse_run_config(load(common, qstat::figure_preset("fig4even")));
      const bool numeric = common.method != "analytic";
      std::string csv = "N,beta_com_omega,lambda,lambda_asymptotic,method\n";
      const auto ns = parse_list(fermi_ns);
      std::vector<std::vector<double>> table;
      if (numeric) {
        double n_max = 1;
        for (double n : ns) n_max = std::max(n_max, n);
        table = qstat::active_engine_probabilities(base.engine, base.schedule, base.system, base.propagator,
                                                   static_cast<int>(n_max), threads);
      }
      for (double n : ns) {
        for (double b : parse_list(fermi_bs)) {
          qstat::FermiEnsemble ens = base.fermi;
          ens.n = static_cast<int>(n);
          ens.engine.n = ens.n;
          ens.beta_com = b / ens.omega_trap;
          const auto configs = qstat::enumerate_configs(ens);
          const double asym = qstat::fermi_f_asymptotic(ens.n, b);
          const std::string head = std::to_string(ens.n) + "," + qstat::format_number(b) + ",";
          if (common.method != "numerical") {
            double f = 0.0;
            for (const auto& cfg : configs) f += cfg.weight * cfg.active;
            csv += head + qstat::format_number(f) + "," + qstat::format_number(asym) + ",enumeration\n";
          }
          if (numeric) {
            const auto out = qstat::combine_outcoupled(configs, table, base.system);
            csv += head + qstat::format_number(out.work.enhancement_ratio.value_or(0.0)) + "," +
                   qstat::format_number(asym) + ",outcoupled\n";
          }
        }
      }
      emit(common, "data.csv", csv);
      return 0;
    }
    if (region->parsed()) {
      qstat::RegionSpec spec;
      for (int k = 0; k <= 16; ++k) spec.delta_over_omega0.push_back(0.25 * k);
      for (int k = 0; k < 40; ++k) spec.omega_t.push_back(0.1 + (10.0 * 3.141592653589793 - 0.1) * k / 39.0);
      for (double n : parse_list(region_ns)) spec.ns.push_back(static_cast<int>(n));
      std::string csv = "delta_over_omega0,omega_T,N,enhanced,ratio\n";
      for (const auto& c : qstat::enhancement_region(spec, threads)) {
        csv += qstat::format_number(c.delta_over_omega0) + "," + qstat::format_number(c.omega_t) + "," +
               std::to_string(c.n) + "," + (c.enhanced ? "1" : "0") + "," + qstat::format_number(c.ratio) + "\n";
      }
      emit(common, "data.csv", csv);
      return 0;
    }
    if (figure->parsed()) {
      qstat::FigureOptions o;
      o.threads = threads;
      o.analytic_only = analytic_only;
      const qstat::FigureReport r = qstat::run_figure(figure_id, o);
      if (!common.out.empty()) {
        Json checks = Json::array();
        for (const auto& a : r.assertions) checks.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
        const Json m{{"tool", "qstat"},       {"version", qstat::kToolVersion}, {"figure", r.id},
                     {"preset", qstat::figure_preset(r.id)}, {"assertions", checks},
                     {"wall_seconds", r.wall_seconds}};
        qstat::write_text_file(common.out + "/data.csv", r.csv());
        qstat::write_text_file(common.out + "/manifest.json", m.dump(2) + "\n");
      } else {
        std::cout << r.csv();
      }
      return report(r.assertions);
    }
    if (verify->parsed()) {
      return report(qstat::run_verify(common.seed, threads));
    }
    if (sweep->parsed()) {
      if (common.config.empty()) qstat::fail(qstat::ErrorCode::ConfigError, "sweep needs --config");
      qstat::SweepSpec spec = qstat::parse_sweep_spec(qstat::load_json_file(common.config));
      if (app.get_option("--method")->count() > 0) spec.method = qstat::parse_sweep_method(common.method);
      if (app.get_option("--seed")->count() > 0) spec.seed = common.seed;
      spec.threads = threads;
      const qstat::Dataset d = qstat::run_sweep(spec);
      if (common.out.empty()) {
        std::cout << qstat::to_csv(d);
      } else {
        qstat::write_dataset(common.out, spec, d);
      }
      if (d.failed_fraction() > 0.01) {
        std::cerr << d.failed << " of " << d.rows.size() << " cells failed\n";
        return 1;
      }
      return 0;
    }
  } catch (const qstat::Error& e) {
    std::cerr << "qstat: " << e.what() << "\n";
    return e.code() == qstat::ErrorCode::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "qstat: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

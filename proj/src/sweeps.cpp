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


#include "qstat/sweeps.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "qstat/parallel.hpp"

namespace qstat {

namespace {

bool is_fermi(const Json& base) {
  return base.contains("engine") && base["engine"].is_object() && base["engine"].contains("statistics") &&
         base["engine"]["statistics"] == "fermi";
}

bool wants_analytic(SweepMethod m) { return m != SweepMethod::Numerical; }
bool wants_numerical(SweepMethod m) { return m != SweepMethod::Analytic; }

std::vector<double> evaluate_cell(const Json& doc, SweepMethod method) {
  const RunConfig c = parse_run_config(doc);
  std::vector<double> out;
  if (c.engine.statistics == Statistics::Fermi) {
    const double f = fermi_f(c.fermi);
    out = {f, f, fermi_f_asymptotic(c.fermi.n, c.fermi.beta_com * c.fermi.omega_trap)};
    if (wants_numerical(method)) {
      const auto r = fermi_outcoupled_work(c.fermi, c.schedule, c.system, c.propagator);
      out.push_back(r.work.enhancement_ratio.value_or(std::numeric_limits<double>::quiet_NaN()));
    }
    return out;
  }
  if (wants_analytic(method)) {
    const double wi = analytic_work(c.engine, c.schedule, c.system, Statistics::Bose).avg_work;
    const double wd = analytic_work(c.engine, c.schedule, c.system, Statistics::Distinguishable).avg_work;
    out.insert(out.end(), {wi, wd, wi / wd});
  }
  if (wants_numerical(method)) {
    const double wi = run_cycle(c.engine, c.schedule, c.system, Statistics::Bose, c.propagator).work.avg_work;
    const double wd =
        run_cycle(c.engine, c.schedule, c.system, Statistics::Distinguishable, c.propagator).work.avg_work;
    out.insert(out.end(), {wi, wd, wi / wd});
  }
  return out;
}

}  // namespace

std::string_view to_string(SweepMethod m) {
  switch (m) {
    case SweepMethod::Analytic: return "analytic";
    case SweepMethod::Numerical: return "numerical";
    case SweepMethod::Both: return "both";
  }
  return "unknown";
}

SweepMethod parse_sweep_method(std::string_view text) {
  if (text == "analytic") return SweepMethod::Analytic;
  if (text == "numerical") return SweepMethod::Numerical;
  if (text == "both") return SweepMethod::Both;
  fail(ErrorCode::ConfigError, "sweep.method: expected analytic, numerical or both, got '" + std::string(text) + "'");
}

SweepSpec parse_sweep_spec(const Json& doc) {
  require(doc.is_object(), ErrorCode::ConfigError, "config: expected a JSON object");
  SweepSpec spec;
  spec.base = doc;
  spec.base.erase("sweep");
  if (!doc.contains("sweep")) return spec;
  const Json& sw = doc.at("sweep");
  require(sw.is_object(), ErrorCode::ConfigError, "sweep: expected an object");
  for (const auto& [key, value] : sw.items()) {
    if (key != "axes" && key != "method" && key != "seed") fail(ErrorCode::ConfigError, "sweep." + key + ": unknown field");
  }
  if (sw.contains("method")) {
    require(sw["method"].is_string(), ErrorCode::ConfigError, "sweep.method: expected a string");
    spec.method = parse_sweep_method(sw["method"].get<std::string>());
  }
  if (sw.contains("seed")) {
    require(sw["seed"].is_number_unsigned() || sw["seed"].is_number_integer(), ErrorCode::ConfigError,
            "sweep.seed: expected a non-negative integer");
    spec.seed = sw["seed"].get<std::uint64_t>();
  }
  if (sw.contains("axes")) {
    require(sw["axes"].is_array(), ErrorCode::ConfigError, "sweep.axes: expected an array");
    std::size_t k = 0;
    for (const auto& ax : sw["axes"]) {
      const std::string path = "sweep.axes[" + std::to_string(k++) + "]";
      require(ax.is_object() && ax.contains("name") && ax["name"].is_string(), ErrorCode::ConfigError,
              path + ": expected an object with a name");
      SweepAxis axis;
      axis.name = ax["name"].get<std::string>();
      require(is_sweepable(axis.name), ErrorCode::ConfigError, path + ".name: unknown parameter '" + axis.name + "'");
      for (const auto& [key, value] : ax.items()) {
        if (key != "name" && key != "values" && key != "range") fail(ErrorCode::ConfigError, path + "." + key + ": unknown field");
      }
      if (ax.contains("values") == ax.contains("range")) {
        fail(ErrorCode::ConfigError, path + ": give exactly one of values or range");
      }
      if (ax.contains("values")) {
        require(ax["values"].is_array() && !ax["values"].empty(), ErrorCode::ConfigError,
                path + ".values: expected a non-empty array");
        for (const auto& v : ax["values"]) {
          require(v.is_number(), ErrorCode::ConfigError, path + ".values: expected numbers");
          axis.values.push_back(v.get<double>());
        }
      } else {
        const Json& r = ax["range"];
        require(r.is_object() && r.contains("start") && r.contains("stop") && r.contains("count") &&
                    r["start"].is_number() && r["stop"].is_number() && r["count"].is_number_integer(),
                ErrorCode::ConfigError, path + ".range: expected {start, stop, count}");
        const double a = r["start"].get<double>();
        const double b = r["stop"].get<double>();
        const int n = r["count"].get<int>();
        require(n >= 1, ErrorCode::ConfigError, path + ".range.count: must be positive");
        for (int i = 0; i < n; ++i) axis.values.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
      }
      spec.axes.push_back(std::move(axis));
    }
  }
  return spec;
}

Json to_json(const SweepSpec& s) {
  Json doc = s.base;
  Json axes = Json::array();
  for (const auto& a : s.axes) axes.push_back(Json{{"name", a.name}, {"values", a.values}});
  doc["sweep"] = Json{{"axes", axes}, {"method", std::string(to_string(s.method))}, {"seed", s.seed}};
  return doc;
}

std::vector<std::string> sweep_metrics(const Json& base, SweepMethod method) {
  if (is_fermi(base)) {
    std::vector<std::string> cols{"f_N", "lambda_analytic", "lambda_asymptotic"};
    if (wants_numerical(method)) cols.emplace_back("lambda_numeric");
    return cols;
  }
  std::vector<std::string> cols;
  if (wants_analytic(method)) cols.insert(cols.end(), {"w_indist_analytic", "w_dist_analytic", "E_analytic"});
  if (wants_numerical(method)) cols.insert(cols.end(), {"w_indist_numeric", "w_dist_numeric", "E_numeric"});
  return cols;
}

Dataset run_sweep(const SweepSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  std::size_t cells = 1;
  for (const auto& a : spec.axes) {
    require(!a.values.empty(), ErrorCode::ConfigError, "sweep axis '" + a.name + "' has no values");
    cells *= a.values.size();
  }
  const std::size_t cap = wants_numerical(spec.method) ? kMaxNumericalCells : kMaxAnalyticCells;
  require(cells <= cap, ErrorCode::ResourceLimit,
          std::to_string(cells) + " cells exceed the limit of " + std::to_string(cap) + " for this method");
  // Catch malformed base configurations once, up front.
  if (spec.axes.empty()) parse_run_config(spec.base);

  Dataset d;
  for (const auto& a : spec.axes) d.columns.push_back(a.name);
  const std::vector<std::string> metrics = sweep_metrics(spec.base, spec.method);
  d.columns.insert(d.columns.end(), metrics.begin(), metrics.end());
  d.rows.resize(cells);

  parallel_for(cells, resolve_threads(spec.threads), [&](std::size_t cell) {
    SweepRow& row = d.rows[cell];
    Json doc = spec.base;
    std::size_t rest = cell;
    row.coords.resize(spec.axes.size());
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
      const auto& a = spec.axes[k];
      row.coords[k] = a.values[rest % a.values.size()];
      rest /= a.values.size();
    }
    try {
      for (std::size_t k = 0; k < spec.axes.size(); ++k) doc = with_parameter(doc, spec.axes[k].name, row.coords[k]);
      row.values = evaluate_cell(doc, spec.method);
    } catch (const Error& e) {
      // A malformed axis value is a usage problem for the whole sweep.
      if (e.code() == ErrorCode::ConfigError) throw;
      row.values.assign(metrics.size(), std::numeric_limits<double>::quiet_NaN());
      row.error = std::string(e.what()).substr(0, std::string(e.what()).find(':'));
    }
  });
  for (const auto& r : d.rows) d.failed += r.error.empty() ? 0 : 1;
  d.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return d;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Dataset& d) {
  std::ostringstream out;
  for (const auto& c : d.columns) out << c << ',';
  out << "error\n";
  for (const auto& r : d.rows) {
    for (double v : r.coords) out << format_number(v) << ',';
    for (double v : r.values) out << format_number(v) << ',';
    out << r.error << '\n';
  }
  return out.str();
}

Json manifest(const SweepSpec& spec, const Dataset& d) {
  return Json{{"tool", "qstat"},       {"version", kToolVersion}, {"spec", to_json(spec)},
              {"columns", d.columns},  {"cells", d.rows.size()},  {"failed", d.failed},
              {"wall_seconds", d.wall_seconds}};
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

void write_dataset(const std::string& dir, const SweepSpec& spec, const Dataset& d) {
  write_text_file(dir + "/data.csv", to_csv(d));
  write_text_file(dir + "/manifest.json", manifest(spec, d).dump(2) + "\n");
}

}  // namespace qstat

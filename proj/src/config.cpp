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


#include "qstat/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace qstat {

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::ConfigError, path + ": " + what);
}

// One JSON object with a dotted path for diagnostics. Every key must be read
// before finish(), which is how unknown fields get caught.
class Section {
 public:
  Section(const Json& doc, std::string path) : path_(std::move(path)) {
    if (doc.is_null()) return;
    if (!doc.is_object()) config_error(path_, "expected an object");
    obj_ = &doc;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_ != nullptr && obj_->contains(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const Json& v = obj_->at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf" || s == "infinity") return kInfinity;
    }
    config_error(where(key), "expected a number");
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const Json& v = obj_->at(key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d == std::floor(d) && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    config_error(where(key), "expected an integer");
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const Json& v = obj_->at(key);
    if (!v.is_string()) config_error(where(key), "expected a string");
    return v.get<std::string>();
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = obj_->at(key);
    if (!v.is_boolean()) config_error(where(key), "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) config_error(where(key), "missing");
    const Json& v = obj_->at(key);
    if (!v.is_array()) config_error(where(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) config_error(where(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  RMatrix matrix(const Json& v, const std::string& path) const {
    if (!v.is_array() || v.empty()) config_error(path, "expected a square array of rows");
    const auto n = static_cast<Index>(v.size());
    RMatrix m(n, n);
    for (Index i = 0; i < n; ++i) {
      const Json& row = v[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != n) config_error(path, "expected a square array of rows");
      for (Index j = 0; j < n; ++j) {
        const Json& e = row[static_cast<std::size_t>(j)];
        if (!e.is_number()) config_error(path, "expected numbers");
        m(i, j) = e.get<double>();
      }
    }
    return m;
  }

  const Json& raw(const std::string& key) {
    if (!has(key)) config_error(where(key), "missing");
    return obj_->at(key);
  }

  void exclusive(const std::string& a, const std::string& b) {
    if (obj_ != nullptr && obj_->contains(a) && obj_->contains(b)) {
      config_error(path_, "give either '" + a + "' or '" + b + "', not both");
    }
  }

  void finish() const {
    if (obj_ == nullptr) return;
    for (const auto& [key, value] : obj_->items()) {
      if (!seen_.contains(key)) config_error(where(key), "unknown field");
    }
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

 private:
  std::string path_;
  const Json* obj_ = nullptr;
  std::set<std::string> seen_;
};

const Json& child(const Json& doc, const char* key) {
  static const Json null;
  return doc.contains(key) ? doc.at(key) : null;
}

template <class Fn>
auto wrap(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::string msg = e.what();
    if (e.code() == ErrorCode::ConfigError) {
      msg.erase(0, msg.find(": ") + 2);
      // Already names a field at or below this one.
      if (msg.starts_with(path)) throw;
    }
    config_error(path, msg);
  }
}

EngineParams parse_engine(const Json& doc) {
  Section s(doc, "engine");
  EngineParams p;
  p.n = s.integer("N", p.n);
  p.omega0 = s.number("omega0", p.omega0);
  p.delta = s.number("delta", p.delta);
  p.v = s.number("v", p.v);
  p.period = s.number("T", p.period);
  s.exclusive("beta_c", "beta_c_E0");
  s.exclusive("beta_h", "beta_h_EhalfT");
  p.beta_c = s.number("beta_c", p.beta_c);
  p.beta_h = s.number("beta_h", p.beta_h);
  const bool cold_product = s.has("beta_c_E0");
  const bool hot_product = s.has("beta_h_EhalfT");
  const double bc = s.number("beta_c_E0", 0.0);
  const double bh = s.number("beta_h_EhalfT", 0.0);
  const std::string stats = s.text("statistics", "bose");
  const std::string dir = s.text("gap_direction", "increasing");
  s.finish();
  wrap("engine.statistics", [&] { p.statistics = parse_statistics(stats); });
  wrap("engine.gap_direction", [&] { p.gap_direction = parse_gap_direction(dir); });
  if (cold_product || hot_product) {
    EngineParams probe = p;
    set_bath_products(probe, cold_product ? bc : 1.0, hot_product ? bh : 1.0);
    if (cold_product) p.beta_c = probe.beta_c;
    if (hot_product) p.beta_h = probe.beta_h;
  }
  wrap("engine", [&] { p.validate(); });
  return p;
}

CouplingSchedule parse_coupling(const Json& doc, const EngineParams& p) {
  Section s(doc, "coupling");
  const std::string kind = s.text("kind", "impulse");
  CouplingSchedule out;
  if (kind == "impulse") {
    s.exclusive("t1", "t1_over_half_period");
    ImpulseCoupling k;
    k.g = s.number("g", 0.01);
    k.t1 = s.has("t1") ? s.number("t1", 0.0) : s.number("t1_over_half_period", 0.35) * p.half_period();
    out = k;
  } else if (kind == "plateau") {
    s.exclusive("alpha", "alpha_T");
    const double g = s.number("g", 0.5);
    const double delta_t = s.number("delta_t", 0.9);
    const double alpha = s.has("alpha") ? s.number("alpha", 0.0) : s.number("alpha_T", 2142.0) / p.period;
    SmoothPlateauCoupling c = wrap("coupling", [&] { return smooth_plateau(g, delta_t, alpha, p.period); });
    c.t_on = s.number("t_on", c.t_on);
    c.t_off = s.number("t_off", c.t_off);
    out = c;
  } else if (kind == "sampled") {
    SampledCoupling c;
    c.times = s.numbers("times");
    c.values = s.numbers("values");
    out = c;
  } else {
    config_error("coupling.kind", "expected impulse, plateau or sampled, got '" + kind + "'");
  }
  s.finish();
  wrap("coupling", [&] { validate_schedule(out, p); });
  return out;
}

ExternalSystem parse_system(const Json& doc, const EngineParams& p) {
  Section s(doc, "system");
  const std::string kind = s.text("kind", "harmonic");
  ExternalSystem sys = harmonic_system(1.0, 2);
  if (kind == "harmonic") {
    s.exclusive("omega", "omega_T");
    const double omega =
        s.has("omega") ? s.number("omega", 0.0) : s.number("omega_T", 2.0 * std::numbers::pi * 0.05) / p.period;
    const int dim = s.integer("dim", 16);
    sys = wrap("system", [&] { return harmonic_system(omega, dim); });
  } else if (kind == "levels") {
    std::vector<double> energies = s.numbers("energies");
    const std::string label = s.text("label", "levels");
    const Json& v = s.raw("coupling");
    CMatrix m;
    if (v.is_object()) {
      Section c(v, "system.coupling");
      const RMatrix re = c.matrix(c.raw("re"), "system.coupling.re");
      const RMatrix im = c.has("im") ? c.matrix(c.raw("im"), "system.coupling.im") : RMatrix::Zero(re.rows(), re.cols());
      c.finish();
      if (im.rows() != re.rows()) config_error("system.coupling", "re and im differ in shape");
      m = re.cast<Complex>() + kI * im.cast<Complex>();
    } else {
      m = s.matrix(v, "system.coupling").cast<Complex>();
    }
    DenseOperator v_s = wrap("system.coupling", [&] { return DenseOperator(SpaceKind::generic(m.rows()), m); });
    sys = ExternalSystem{std::move(energies), std::move(v_s), label};
  } else {
    config_error("system.kind", "expected harmonic or levels, got '" + kind + "'");
  }
  s.finish();
  wrap("system", [&] { sys.validate(); });
  return sys;
}

FermiEnsemble parse_fermi(const Json& doc, const EngineParams& p) {
  Section s(doc, "fermi");
  FermiEnsemble f;
  f.n = p.n;
  f.engine = p;
  f.omega_trap = s.number("omega_trap", 1.0);
  s.exclusive("beta_com", "beta_com_omega");
  f.beta_com = s.has("beta_com") ? s.number("beta_com", 0.0) : s.number("beta_com_omega", 4.0) / f.omega_trap;
  f.level_count = s.integer("levels", 0);
  f.config_cap = static_cast<std::size_t>(s.integer("config_cap", 1'000'000));
  s.finish();
  if (!doc.is_null() || p.statistics == Statistics::Fermi) wrap("fermi", [&] { f.validate(); });
  return f;
}

PropagatorConfig parse_propagator(const Json& doc) {
  Section s(doc, "propagator");
  PropagatorConfig c;
  const std::string stepper = s.text("stepper", "strang");
  c.stepper = wrap("propagator.stepper", [&] { return parse_stepper(stepper); });
  c.dt = s.number("dt", c.dt);
  c.unitarity_tol = s.number("unitarity_tol", c.unitarity_tol);
  c.leakage_tol = s.number("leakage_tol", c.leakage_tol);
  c.enforce_step_rule = s.flag("enforce_step_rule", c.enforce_step_rule);
  const std::string method = s.text("product_method", "sectors");
  if (method == "sectors") {
    c.product_method = ProductMethod::SpinSectors;
  } else if (method == "kronecker") {
    c.product_method = ProductMethod::Kronecker;
  } else {
    config_error("propagator.product_method", "expected sectors or kronecker");
  }
  c.product_cap = s.integer("product_cap", c.product_cap);
  c.dense_cap = s.integer("dense_cap", static_cast<int>(c.dense_cap));
  c.prune_weight = s.number("prune_weight", c.prune_weight);
  c.trace_stride = static_cast<std::size_t>(std::max(1, s.integer("trace_stride", static_cast<int>(c.trace_stride))));
  s.finish();
  if (c.dt < 0.0) config_error("propagator.dt", "must be non-negative");
  return c;
}

struct Alias {
  const char* name;
  const char* excludes;
  bool integral;
};

constexpr Alias kParameters[] = {
    {"engine.N", nullptr, true},
    {"engine.omega0", nullptr, false},
    {"engine.delta", nullptr, false},
    {"engine.v", nullptr, false},
    {"engine.T", nullptr, false},
    {"engine.beta_c", "beta_c_E0", false},
    {"engine.beta_h", "beta_h_EhalfT", false},
    {"engine.beta_c_E0", "beta_c", false},
    {"engine.beta_h_EhalfT", "beta_h", false},
    {"coupling.g", nullptr, false},
    {"coupling.t1", "t1_over_half_period", false},
    {"coupling.t1_over_half_period", "t1", false},
    {"coupling.delta_t", nullptr, false},
    {"coupling.alpha", "alpha_T", false},
    {"coupling.alpha_T", "alpha", false},
    {"system.omega", "omega_T", false},
    {"system.omega_T", "omega", false},
    {"system.dim", nullptr, true},
    {"fermi.omega_trap", nullptr, false},
    {"fermi.beta_com", "beta_com_omega", false},
    {"fermi.beta_com_omega", "beta_com", false},
    {"fermi.levels", nullptr, true},
    {"propagator.dt", nullptr, false},
};

const Alias* find_parameter(std::string_view name) {
  for (const auto& a : kParameters) {
    if (name == a.name) return &a;
  }
  return nullptr;
}

}  // namespace

RunConfig parse_run_config(const Json& doc) {
  if (!doc.is_object()) config_error("config", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    static const std::set<std::string> known{"engine", "coupling", "system", "fermi", "propagator", "sweep", "comment"};
    if (!known.contains(key)) config_error(key, "unknown section");
  }
  RunConfig c;
  c.engine = parse_engine(child(doc, "engine"));
  c.schedule = parse_coupling(child(doc, "coupling"), c.engine);
  c.system = parse_system(child(doc, "system"), c.engine);
  c.fermi = parse_fermi(child(doc, "fermi"), c.engine);
  c.propagator = parse_propagator(child(doc, "propagator"));
  return c;
}

const std::vector<std::string>& sweepable_parameters() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& a : kParameters) v.emplace_back(a.name);
    return v;
  }();
  return names;
}

bool is_sweepable(std::string_view name) { return find_parameter(name) != nullptr; }

Json with_parameter(const Json& doc, std::string_view name, double value) {
  const Alias* a = find_parameter(name);
  if (a == nullptr) config_error(std::string(name), "not a sweepable parameter");
  const std::string full(name);
  const auto dot = full.find('.');
  const std::string section = full.substr(0, dot);
  const std::string key = full.substr(dot + 1);
  Json out = doc;
  if (!out.contains(section)) out[section] = Json::object();
  Json& sec = out[section];
  if (a->excludes != nullptr) sec.erase(a->excludes);
  if (a->integral) {
    if (value != std::floor(value)) config_error(full, "expected an integer value");
    sec[key] = static_cast<long long>(value);
  } else {
    sec[key] = value;
  }
  return out;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error(path, "cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    config_error(path, e.what());
  }
}

Json to_json(const WorkRecord& r) {
  Json j;
  j["statistics"] = std::string(to_string(r.statistics));
  j["method"] = std::string(to_string(r.method));
  j["avg_work"] = r.avg_work;
  j["energies"] = r.energies;
  j["p"] = r.p_excite;
  j["enhancement_ratio"] = r.enhancement_ratio ? Json(*r.enhancement_ratio) : Json(nullptr);
  j["perturbative_warning"] = r.perturbative_warning;
  return j;
}

Json to_json(const CycleDiagnostics& d) {
  return Json{{"unitarity_drift", d.unitarity_drift}, {"stroke_drift", d.stroke_drift}, {"leakage", d.leakage},
              {"dt", d.dt}, {"steps", d.steps}, {"max_members", d.max_members}};
}

Json to_json(const CycleResult& r) {
  Json j;
  j["work"] = to_json(r.work);
  j["per_stroke_energies"] = r.per_stroke_energies;
  j["diagnostics"] = to_json(r.diagnostics);
  const StateCheck check = r.final_state.check();
  j["final_state"] = Json{{"dim", r.final_state.rho.rows()},
                          {"trace_error", check.trace_error},
                          {"hermiticity_error", check.hermiticity_error},
                          {"min_eigenvalue", check.min_eigenvalue}};
  return j;
}

}  // namespace qstat

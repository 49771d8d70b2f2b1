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

#include "qstat/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "qstat/engine_space.hpp"

// The composite state is carried as a weighted ensemble of orthonormal pure
// states. Each member lives on (engine block) x (system); both factors are
// written in the eigenbasis of their coupling operator so that the coupling
// exponential is a phase. Per block the members are packed into one row-major
// array indexed [engine a][member k][system s]: viewed as dE x (K dS) the
// engine acts by a single product, viewed as (dE K) x dS the system does.
//
// While the coupling is off, nothing entangles engine and system, so a stroke
// only accumulates the engine propagator until the coupling first switches
// on. After the last nonzero coupling of a stroke only Tr_E matters, which
// then evolves under H_S alone.

namespace qstat {

namespace {

struct SystemFrame {
  explicit SystemFrame(const ExternalSystem& system) : eps(system.dim()) {
    for (Index i = 0; i < system.dim(); ++i) eps(i) = system.energies[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<CMatrix> es(system.coupling.matrix);
    x = es.eigenvectors();
    mu = es.eigenvalues();
  }

  Index dim() const { return eps.size(); }

  CVector free_phases(double tau) const {
    return (eps * (-tau)).unaryExpr([](double a) { return std::polar(1.0, a); });
  }

  /// exp(-i H_S tau) in the V_S eigenbasis.
  const CMatrix& free_in_x(double tau) {
    auto it = cache.find(tau);
    if (it != cache.end()) return it->second;
    CMatrix u = x.adjoint() * free_phases(tau).asDiagonal() * x;
    // This matrix is applied at every step, so any norm error it carries
    // compounds linearly; one Newton-Schulz pass pulls it back to unitary.
    u = (0.5 * u * (3.0 * CMatrix::Identity(u.rows(), u.cols()) - u.adjoint() * u)).eval();
    return cache.emplace(tau, std::move(u)).first->second;
  }

  CMatrix evolve_energy_basis(const CMatrix& sigma, double tau) const {
    const CVector ph = free_phases(tau);
    return ph.asDiagonal() * sigma * ph.conjugate().asDiagonal();
  }

  CMatrix h_in_x() const { return x.adjoint() * eps.cast<Complex>().asDiagonal() * x; }

  RVector eps;
  CMatrix x;
  RVector mu;
  std::map<double, CMatrix> cache;
};

struct Block {
  EngineBlock engine;
  std::vector<double> weights;
  Index members = 0;
  RowCMatrix psi;  // (dE * K) x dS
  std::vector<int> lambda_index;
  std::vector<double> lambda_values;
};

struct StrokeReport {
  CMatrix sigma;
  double drift = 0.0;
  double leakage = 0.0;
  std::size_t steps = 0;
  std::size_t members = 0;
};

double top_leakage(const CMatrix& sigma) {
  const Index d = sigma.rows();
  double leak = sigma(d - 1, d - 1).real();
  if (d >= 3) leak += sigma(d - 2, d - 2).real();
  return std::max(leak, 0.0);
}

double system_energy(const SystemFrame& frame, const CMatrix& sigma) {
  return (sigma.diagonal().real().array() * frame.eps.array()).sum();
}

// Relative weights of the spin-j blocks in the product-space Gibbs state.
std::vector<double> sector_weights(const std::vector<WeightedBlock>& blocks, int n, double x) {
  std::vector<double> w;
  double total = 0.0;
  for (const auto& wb : blocks) {
    const int two_j = wb.block.size();
    double z = 0.0;
    for (int k = 0; k <= two_j; ++k) {
      // m = -j + k; exponent -2x(m + N/2) <= 0
      const double shift = 0.5 * (n - two_j) + k;
      z += std::isinf(x) ? (shift == 0.0 ? 1.0 : 0.0) : std::exp(-2.0 * x * shift);
    }
    w.push_back(wb.multiplicity * z);
    total += w.back();
  }
  for (double& v : w) v /= total;
  return w;
}

struct Step {
  double t;
  double h;
  bool kick_after = false;
};

class CyclePropagator {
 public:
  CyclePropagator(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system,
                  Statistics statistics, const PropagatorConfig& config)
      : p_(p), schedule_(schedule), system_(system), frame_(system), config_(config) {
    if (statistics == Statistics::Bose) {
      blocks_.push_back({EngineBlock::spin(p.n), 1.0});
    } else if (statistics == Statistics::Distinguishable) {
      if (config.product_method == ProductMethod::Kronecker) {
        if (p.n > config.product_cap) {
          fail(ErrorCode::ResourceLimit,
               "product space limited to N <= " + std::to_string(config.product_cap));
        }
        blocks_.push_back({EngineBlock::product(p.n), 1.0});
      } else {
        blocks_ = spin_sector_decomposition(p.n);
      }
    } else {
      fail(ErrorCode::InvalidArgument, "run_cycle handles bose and distinguishable engines");
    }
    sector_ = statistics == Statistics::Distinguishable && config.product_method == ProductMethod::SpinSectors;

    const double rule = step_rule(p, schedule, system);
    if (config.dt > 0.0) {
      if (config.enforce_step_rule && config.dt > rule * (1.0 + 1e-9)) {
        fail(ErrorCode::InvalidArgument,
             "dt = " + std::to_string(config.dt) + " exceeds the step rule " + std::to_string(rule));
      }
      dt_ = config.dt;
    } else {
      dt_ = rule;
    }
    if (const auto* s = std::get_if<SmoothPlateauCoupling>(&schedule)) {
      g_floor_ = 1e-15 * plateau_height(*s);
    } else if (const auto* s = std::get_if<SampledCoupling>(&schedule)) {
      double peak = 0.0;
      for (double v : s->values) peak = std::max(peak, std::abs(v));
      g_floor_ = 1e-15 * peak;
    }
  }

  double dt() const { return dt_; }

  StrokeReport stroke(double t0, double beta, const CMatrix& sigma_in) {
    const double t_end = t0 + p_.half_period();
    const std::vector<Step> steps = grid(t0, t_end);
    StrokeReport rep;
    rep.steps = steps.size();

    // Locate the coupling window.
    const bool impulse = is_impulse(schedule_);
    std::ptrdiff_t first = -1, last = -1;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const bool active = impulse ? steps[k].kick_after : std::abs(coupling_at(steps[k])) > g_floor_;
      if (active) {
        if (first < 0) first = static_cast<std::ptrdiff_t>(k);
        last = static_cast<std::ptrdiff_t>(k);
      }
    }
    if (first < 0) {
      rep.sigma = frame_.evolve_energy_basis(sigma_in, t_end - t0);
      sample_reduced(t_end, rep.sigma);
      rep.leakage = top_leakage(rep.sigma);
      return rep;
    }

    // Engine alone up to the window. An impulse lands at the end of its step.
    const auto engine_until = static_cast<std::size_t>(impulse ? first + 1 : first);
    std::vector<EngineOp> u;
    for (const auto& wb : blocks_) u.push_back(wb.block.identity());
    for (std::size_t k = 0; k < engine_until; ++k) {
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        u[b] = EngineOp::compose(engine_step(blocks_[b].block, steps[k].t + 0.5 * steps[k].h, steps[k].h), u[b]);
      }
      if (config_.trace && k % config_.trace_stride == 0) {
        sample_reduced(steps[k].t, frame_.evolve_energy_basis(sigma_in, steps[k].t - t0));
      }
    }
    double drift = 0.0;
    for (const auto& op : u) drift = std::max(drift, op.unitarity_error());

    const double t_start = impulse ? steps[engine_until - 1].t + steps[engine_until - 1].h : steps[engine_until].t;
    std::vector<Block> ensemble = materialize(t0, beta, sigma_in, t_start, u);
    for (const auto& b : ensemble) rep.members += static_cast<std::size_t>(b.members);

    double t_window_end = t_start;
    if (impulse) {
      for (auto& b : ensemble) coupling_phase(b, std::get<ImpulseCoupling>(schedule_).g);
    } else {
      const auto lo = static_cast<std::size_t>(first);
      const auto hi = static_cast<std::size_t>(last);
      if (config_.stepper == Stepper::Strang) {
        strang(ensemble, steps, lo, hi);
      } else {
        dense_steps(ensemble, steps, lo, hi);
      }
      t_window_end = steps[hi].t + steps[hi].h;
    }

    for (const auto& b : ensemble) drift = std::max(drift, gram_drift(b));
    CMatrix sigma = reduced(ensemble);
    rep.leakage = top_leakage(sigma);
    rep.sigma = frame_.evolve_energy_basis(sigma, t_end - t_window_end);
    rep.drift = drift;
    sample_reduced(t_end, rep.sigma);
    return rep;
  }

 private:
  std::vector<Step> grid(double t0, double t_end) const {
    std::vector<double> cuts{t0};
    if (const auto* k = std::get_if<ImpulseCoupling>(&schedule_)) {
      if (k->t1 > t0 && k->t1 < t_end) cuts.push_back(k->t1);
    }
    cuts.push_back(t_end);
    std::vector<Step> steps;
    for (std::size_t c = 1; c < cuts.size(); ++c) {
      const double len = cuts[c] - cuts[c - 1];
      const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / dt_ * (1.0 - 1e-12))));
      const double h = len / static_cast<double>(n);
      for (std::size_t k = 0; k < n; ++k) steps.push_back({cuts[c - 1] + static_cast<double>(k) * h, h, false});
      if (c + 1 < cuts.size()) steps.back().kick_after = true;
    }
    return steps;
  }

  double coupling_at(const Step& s) const { return g_of_t(schedule_, s.t + 0.5 * s.h); }

  EngineOp engine_step(const EngineBlock& block, double t_mid, double tau) const {
    return block.step(omega_of_t(p_, t_mid), p_.delta, tau);
  }

  std::vector<Block> materialize(double t0, double beta, const CMatrix& sigma_in, double t_start,
                                 const std::vector<EngineOp>& u) {
    const Index ds = frame_.dim();
    // System members: eigenvectors of sigma evolved freely to t_start, in the
    // V_S eigenbasis.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (sigma_in + sigma_in.adjoint()));
    const CVector ph = frame_.free_phases(t_start - t0);
    std::vector<double> sys_w;
    std::vector<CVector> sys_v;
    for (Index k = ds - 1; k >= 0; --k) {
      const double w = es.eigenvalues()(k);
      if (w <= config_.prune_weight) continue;
      sys_w.push_back(w);
      sys_v.push_back(frame_.x.adjoint() * ph.cwiseProduct(es.eigenvectors().col(k)));
    }

    const double omega = omega_of_t(p_, t0);
    const double x = beta * gap_energy(p_, t0);
    const std::vector<double> bw = sector_ ? sector_weights(blocks_, p_.n, x) : std::vector<double>(blocks_.size(), 1.0);

    std::vector<Block> out;
    double total = 0.0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (bw[b] <= config_.prune_weight) continue;
      const EngineBlock& eb = blocks_[b].block;
      std::vector<GibbsMember> gm = eb.gibbs(omega, p_.delta, beta);
      Block blk{eb, {}, 0, {}, {}, {}};
      std::vector<std::pair<const GibbsMember*, std::size_t>> pairs;
      for (const auto& m : gm) {
        for (std::size_t s = 0; s < sys_w.size(); ++s) {
          const double w = bw[b] * m.weight * sys_w[s];
          if (w <= config_.prune_weight) continue;
          pairs.emplace_back(&m, s);
          blk.weights.push_back(w);
          total += w;
        }
      }
      if (pairs.empty()) continue;
      const Index de = eb.dim();
      const auto kk = static_cast<Index>(pairs.size());
      blk.members = kk;
      blk.psi.resize(de * kk, ds);
      for (Index k = 0; k < kk; ++k) {
        const auto& [gmem, s] = pairs[static_cast<std::size_t>(k)];
        CVector ev = gmem->vec;
        u[b].apply(ev.data(), de, 1);
        for (Index a = 0; a < de; ++a) blk.psi.row(a * kk + k) = ev(a) * sys_v[s].transpose();
      }
      index_lambdas(blk);
      out.push_back(std::move(blk));
    }
    require(total > 0.0, ErrorCode::NumericalFailure, "empty ensemble");
    for (auto& blk : out)
      for (double& w : blk.weights) w /= total;
    return out;
  }

  static void index_lambdas(Block& blk) {
    const RVector& lam = blk.engine.coupling_eigenvalues();
    for (Index a = 0; a < lam.size(); ++a) {
      auto it = std::find_if(blk.lambda_values.begin(), blk.lambda_values.end(),
                             [&](double v) { return std::abs(v - lam(a)) < 1e-12; });
      if (it == blk.lambda_values.end()) {
        blk.lambda_values.push_back(lam(a));
        blk.lambda_index.push_back(static_cast<int>(blk.lambda_values.size() - 1));
      } else {
        blk.lambda_index.push_back(static_cast<int>(it - blk.lambda_values.begin()));
      }
    }
  }

  void coupling_phase(Block& blk, double theta) const {
    const Index ds = frame_.dim();
    const auto nl = static_cast<Index>(blk.lambda_values.size());
    CMatrix table(nl, ds);
    for (Index l = 0; l < nl; ++l)
      for (Index s = 0; s < ds; ++s)
        table(l, s) = std::polar(1.0, -theta * blk.lambda_values[static_cast<std::size_t>(l)] * frame_.mu(s));
    const Index de = blk.engine.dim();
    for (Index a = 0; a < de; ++a) {
      const auto row = table.row(blk.lambda_index[static_cast<std::size_t>(a)]);
      auto rows = blk.psi.middleRows(a * blk.members, blk.members);
      rows.array().rowwise() *= row.array();
    }
  }

  void apply_engine(Block& blk, const EngineOp& op) const {
    op.apply(blk.psi.data(), blk.engine.dim(), blk.members * frame_.dim());
  }

  void apply_system(Block& blk, double tau) {
    const CMatrix& s = frame_.free_in_x(tau);
    blk.psi = (blk.psi * s.transpose()).eval();
  }

  void strang(std::vector<Block>& ensemble, const std::vector<Step>& steps, std::size_t lo, std::size_t hi) {
    auto half = [&](const Block& b, std::size_t k) {
      return engine_step(b.engine, steps[k].t + 0.5 * steps[k].h, 0.5 * steps[k].h);
    };
    for (auto& b : ensemble) {
      apply_engine(b, half(b, lo));
      apply_system(b, 0.5 * steps[lo].h);
    }
    for (std::size_t k = lo; k <= hi; ++k) {
      const double theta = coupling_at(steps[k]) * steps[k].h;
      for (auto& b : ensemble) {
        coupling_phase(b, theta);
        if (k < hi) {
          apply_engine(b, EngineOp::compose(half(b, k + 1), half(b, k)));
          apply_system(b, 0.5 * (steps[k].h + steps[k + 1].h));
        }
      }
      if (config_.trace && (k - lo) % config_.trace_stride == 0 && k < hi) {
        sample_ensemble(steps[k + 1].t, ensemble);
      }
    }
    for (auto& b : ensemble) {
      apply_system(b, 0.5 * steps[hi].h);
      apply_engine(b, half(b, hi));
    }
  }

  CMatrix composite_hamiltonian(const Block& b, double t, double g) const {
    const Index de = b.engine.dim();
    const Index ds = frame_.dim();
    CMatrix h = kron(b.engine.hamiltonian(omega_of_t(p_, t), p_.delta), CMatrix::Identity(ds, ds)) +
                kron(CMatrix::Identity(de, de), frame_.h_in_x());
    const RVector& lam = b.engine.coupling_eigenvalues();
    for (Index a = 0; a < de; ++a)
      for (Index s = 0; s < ds; ++s) h(a * ds + s, a * ds + s) += g * lam(a) * frame_.mu(s);
    return h;
  }

  void dense_steps(std::vector<Block>& ensemble, const std::vector<Step>& steps, std::size_t lo, std::size_t hi) {
    const Index ds = frame_.dim();
    for (std::size_t k = lo; k <= hi; ++k) {
      const Step& st = steps[k];
      for (auto& b : ensemble) {
        const Index de = b.engine.dim();
        const Index dim = de * ds;
        if (dim > config_.dense_cap) {
          fail(ErrorCode::ResourceLimit, "dense stepper limited to composite dimension " +
                                             std::to_string(config_.dense_cap));
        }
        CMatrix h;
        if (config_.stepper == Stepper::ExponentialMidpoint) {
          h = composite_hamiltonian(b, st.t + 0.5 * st.h, coupling_at(st));
        } else {
          const double ta = st.t;
          const double tb = std::min(st.t + st.h, p_.period);
          h = 0.5 * (composite_hamiltonian(b, ta, g_of_t(schedule_, ta)) +
                     composite_hamiltonian(b, tb, g_of_t(schedule_, tb)));
        }
        const CMatrix u = unitary_exponential(h, st.h);
        CMatrix m(dim, b.members);
        for (Index a = 0; a < de; ++a)
          for (Index kk = 0; kk < b.members; ++kk) m.block(a * ds, kk, ds, 1) = b.psi.row(a * b.members + kk).transpose();
        m = (u * m).eval();
        for (Index a = 0; a < de; ++a)
          for (Index kk = 0; kk < b.members; ++kk) b.psi.row(a * b.members + kk) = m.block(a * ds, kk, ds, 1).transpose();
      }
      if (config_.trace && (k - lo) % config_.trace_stride == 0) sample_ensemble(st.t + st.h, ensemble);
    }
  }

  double gram_drift(const Block& b) const {
    const Index kk = b.members;
    CMatrix g = CMatrix::Zero(kk, kk);
    for (Index a = 0; a < b.engine.dim(); ++a) {
      const auto rows = b.psi.middleRows(a * kk, kk);
      g.noalias() += rows.conjugate() * rows.transpose();
    }
    return (g - CMatrix::Identity(kk, kk)).cwiseAbs().maxCoeff();
  }

  CMatrix reduced(const std::vector<Block>& ensemble) const {
    const Index ds = frame_.dim();
    CMatrix sx = CMatrix::Zero(ds, ds);
    for (const auto& b : ensemble) {
      RowCMatrix m = b.psi;
      for (Index a = 0; a < b.engine.dim(); ++a)
        for (Index k = 0; k < b.members; ++k) m.row(a * b.members + k) *= std::sqrt(b.weights[static_cast<std::size_t>(k)]);
      sx.noalias() += m.transpose() * m.conjugate();
    }
    CMatrix se = frame_.x * sx * frame_.x.adjoint();
    return 0.5 * (se + se.adjoint());
  }

  double ensemble_trace(const std::vector<Block>& ensemble) const {
    double tr = 0.0;
    for (const auto& b : ensemble)
      for (Index a = 0; a < b.engine.dim(); ++a)
        for (Index k = 0; k < b.members; ++k)
          tr += b.weights[static_cast<std::size_t>(k)] * b.psi.row(a * b.members + k).squaredNorm();
    return tr;
  }

  void sample_reduced(double t, const CMatrix& sigma) {
    if (!config_.trace) return;
    config_.trace({t, sigma.trace().real(), top_leakage(sigma), system_energy(frame_, sigma)});
  }

  void sample_ensemble(double t, const std::vector<Block>& ensemble) {
    if (!config_.trace) return;
    const CMatrix sigma = reduced(ensemble);
    config_.trace({t, ensemble_trace(ensemble), top_leakage(sigma), system_energy(frame_, sigma)});
  }

  const EngineParams& p_;
  const CouplingSchedule& schedule_;
  const ExternalSystem& system_;
  SystemFrame frame_;
  const PropagatorConfig& config_;
  std::vector<WeightedBlock> blocks_;
  bool sector_ = false;
  double dt_ = 0.0;
  double g_floor_ = 0.0;
};

}  // namespace

std::string_view to_string(Stepper s) {
  switch (s) {
    case Stepper::Strang: return "strang";
    case Stepper::ExponentialMidpoint: return "exponential-midpoint";
    case Stepper::Magnus2: return "magnus2";
  }
  return "unknown";
}

Stepper parse_stepper(std::string_view text) {
  if (text == "strang") return Stepper::Strang;
  if (text == "exponential-midpoint" || text == "midpoint") return Stepper::ExponentialMidpoint;
  if (text == "magnus2") return Stepper::Magnus2;
  fail(ErrorCode::ConfigError, "unknown stepper '" + std::string(text) + "'");
}

double step_rule(const EngineParams& p, const CouplingSchedule& schedule, const ExternalSystem& system) {
  const double emax = std::max(gap_energy(p, 0.0), gap_energy(p, p.half_period()));
  double rule = 0.01 / (p.n * emax);
  for (double e : system.energies) {
    if (e > 0.0) {
      rule = std::min(rule, 0.01 / e);
      break;
    }
  }
  if (const auto* s = std::get_if<SmoothPlateauCoupling>(&schedule)) rule = std::min(rule, 0.25 / s->alpha);
  return rule;
}

CycleResult run_cycle(const EngineParams& params, const CouplingSchedule& schedule, const ExternalSystem& system,
                      Statistics statistics, const PropagatorConfig& config) {
  params.validate();
  validate_schedule(schedule, params);
  system.validate();
  CyclePropagator prop(params, schedule, system, statistics, config);

  const Index ds = system.dim();
  CMatrix sigma0 = CMatrix::Zero(ds, ds);
  sigma0(0, 0) = 1.0;
  const StrokeReport s1 = prop.stroke(0.0, params.beta_c, sigma0);
  const StrokeReport s2 = prop.stroke(params.half_period(), params.beta_h, s1.sigma);

  CycleDiagnostics diag;
  diag.stroke_drift = {s1.drift, s2.drift};
  diag.unitarity_drift = std::max(s1.drift, s2.drift);
  diag.leakage = std::max(s1.leakage, s2.leakage);
  diag.dt = prop.dt();
  diag.steps = s1.steps + s2.steps;
  diag.max_members = std::max(s1.members, s2.members);
  if (diag.unitarity_drift > config.unitarity_tol) {
    fail(ErrorCode::NumericalFailure, "unitarity drift " + std::to_string(diag.unitarity_drift) +
                                          " exceeds tolerance with dt = " + std::to_string(diag.dt));
  }
  if (diag.leakage > config.leakage_tol) {
    fail(ErrorCode::ResourceLimit, "population " + std::to_string(diag.leakage) +
                                       " in the top two system levels; increase the truncation beyond " +
                                       std::to_string(ds));
  }

  std::vector<double> prob(static_cast<std::size_t>(ds));
  for (Index i = 0; i < ds; ++i) prob[static_cast<std::size_t>(i)] = s2.sigma(i, i).real();
  WorkRecord work = make_work_record(system.energies, std::move(prob), statistics, WorkMethod::ExactNumerical);

  auto energy = [&](const CMatrix& s) {
    double e = 0.0;
    for (Index i = 0; i < ds; ++i) e += system.energies[static_cast<std::size_t>(i)] * s(i, i).real();
    return e;
  };
  QuantumState final_state(system.coupling.space, s2.sigma);
  final_state.validate();
  return CycleResult{std::move(work), std::move(final_state), {0.0, energy(s1.sigma), energy(s2.sigma)}, diag};
}

QuantumState apply_impulse(const QuantumState& state, double g, const DenseOperator& v_r, const DenseOperator& v_s) {
  require(state.space.tag() == SpaceKind::Tag::Composite, ErrorCode::InvalidSpace, "impulse acts on a composite state");
  require(state.space.engine() == v_r.space && state.space.system() == v_s.space, ErrorCode::InvalidSpace,
          "coupling operators do not match the composite space");
  const CMatrix u = unitary_exponential(kron(v_r.matrix, v_s.matrix), g);
  const double err = (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  require(err <= 1e-10, ErrorCode::NumericalFailure, "impulse propagator is not unitary");
  return QuantumState(state.space, u * state.rho * u.adjoint());
}

QuantumState thermal_reset(const QuantumState& state, const DenseOperator& h_e, double beta) {
  require(state.space.tag() == SpaceKind::Tag::Composite, ErrorCode::InvalidSpace, "reset acts on a composite state");
  require(state.space.engine() == h_e.space, ErrorCode::InvalidSpace, "engine Hamiltonian lives on another space");
  const QuantumState gibbs = thermal_state(h_e, beta);
  const QuantumState sys = trace_out_engine(state);
  return QuantumState(state.space, kron(gibbs.rho, sys.rho));
}

double adiabaticity_witness(const EngineParams& params, const PropagatorConfig& config) {
  params.validate();
  const int n = params.n;
  const SpaceKind kind = SpaceKind::dicke(n);
  const double emax = std::max(gap_energy(params, 0.0), gap_energy(params, params.half_period()));
  const double dt = config.dt > 0.0 ? config.dt : 0.01 / (n * emax);
  double witness = 0.0;
  for (double t0 : {0.0, params.half_period()}) {
    const double len = params.half_period();
    const auto steps = static_cast<int>(std::max(200.0, std::ceil(len / dt)));
    const double h = len / steps;
    Eigen::SelfAdjointEigenSolver<CMatrix> es0(engine_hamiltonian(params, t0, kind).matrix);
    CMatrix psi = es0.eigenvectors();
    for (int k = 0; k < steps; ++k) {
      const double t = t0 + k * h;
      psi = unitary_exponential(engine_hamiltonian(params, t + 0.5 * h, kind).matrix, h) * psi;
      const double tn = std::min(t0 + (k + 1) * h, params.period);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(engine_hamiltonian(params, tn, kind).matrix);
      const CMatrix overlap = es.eigenvectors().adjoint() * psi;
      for (Index m = 0; m <= n; ++m) witness = std::max(witness, 1.0 - std::norm(overlap(m, m)));
    }
  }
  return witness;
}

}  // namespace qstat

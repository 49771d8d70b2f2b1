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

#include "qstat/hilbert.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace qstat {

struct SpaceKind::Parts {
  SpaceKind engine;
  SpaceKind system;
};

SpaceKind::SpaceKind(Tag tag, Index size, std::shared_ptr<const Parts> parts)
    : tag_(tag), size_(size), parts_(std::move(parts)) {}

SpaceKind SpaceKind::dicke(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "Dicke sector needs N >= 1");
  return SpaceKind(Tag::DickeSector, n);
}

SpaceKind SpaceKind::full_product(int n) {
  require(n >= 1 && n < 31, ErrorCode::InvalidArgument, "product space needs 1 <= N <= 30");
  return SpaceKind(Tag::FullProduct, n);
}

SpaceKind SpaceKind::ho_truncated(Index dim) {
  require(dim >= 1, ErrorCode::InvalidArgument, "oscillator truncation must be positive");
  return SpaceKind(Tag::HOTruncated, dim);
}

SpaceKind SpaceKind::generic(Index dim) {
  require(dim >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  return SpaceKind(Tag::Generic, dim);
}

SpaceKind SpaceKind::composite(const SpaceKind& engine, const SpaceKind& system) {
  require(engine.tag() != Tag::Composite && system.tag() != Tag::Composite, ErrorCode::InvalidSpace,
          "nested composites are not supported");
  return SpaceKind(Tag::Composite, engine.dim() * system.dim(), std::make_shared<const Parts>(Parts{engine, system}));
}

Index SpaceKind::dim() const {
  switch (tag_) {
    case Tag::DickeSector: return size_ + 1;
    case Tag::FullProduct: return Index{1} << size_;
    default: return size_;
  }
}

const SpaceKind& SpaceKind::engine() const {
  require(tag_ == Tag::Composite, ErrorCode::InvalidSpace, "not a composite space");
  return parts_->engine;
}

const SpaceKind& SpaceKind::system() const {
  require(tag_ == Tag::Composite, ErrorCode::InvalidSpace, "not a composite space");
  return parts_->system;
}

std::string SpaceKind::describe() const {
  switch (tag_) {
    case Tag::DickeSector: return "dicke(" + std::to_string(size_) + ")";
    case Tag::FullProduct: return "product(" + std::to_string(size_) + ")";
    case Tag::HOTruncated: return "ho(" + std::to_string(size_) + ")";
    case Tag::Generic: return "generic(" + std::to_string(size_) + ")";
    case Tag::Composite: return parts_->engine.describe() + "x" + parts_->system.describe();
  }
  return "unknown";
}

bool SpaceKind::operator==(const SpaceKind& other) const {
  if (tag_ != other.tag_ || size_ != other.size_) return false;
  if (tag_ != Tag::Composite) return true;
  return parts_->engine == other.parts_->engine && parts_->system == other.parts_->system;
}

DenseOperator::DenseOperator(SpaceKind s, CMatrix m) : space(std::move(s)), matrix(std::move(m)) {
  require(matrix.rows() == matrix.cols(), ErrorCode::InvalidArgument, "operator must be square");
  require(matrix.rows() == space.dim(), ErrorCode::InvalidSpace,
          "operator dimension " + std::to_string(matrix.rows()) + " does not match " + space.describe());
}

double DenseOperator::hermiticity_error() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }

QuantumState::QuantumState(SpaceKind s, CMatrix r) : space(std::move(s)), rho(std::move(r)) {
  require(rho.rows() == rho.cols(), ErrorCode::InvalidArgument, "density matrix must be square");
  require(rho.rows() == space.dim(), ErrorCode::InvalidSpace,
          "state dimension " + std::to_string(rho.rows()) + " does not match " + space.describe());
}

StateCheck QuantumState::check() const {
  StateCheck c;
  c.trace_error = std::abs(rho.trace() - 1.0);
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const CMatrix sym = 0.5 * (rho + rho.adjoint());
  c.min_eigenvalue = Eigen::SelfAdjointEigenSolver<CMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  return c;
}

void QuantumState::validate(double trace_tol, double herm_tol, double psd_tol) const {
  const StateCheck c = check();
  require(c.ok(trace_tol, herm_tol, psd_tol), ErrorCode::NumericalFailure,
          "invalid density matrix: trace error " + std::to_string(c.trace_error) + ", hermiticity error " +
              std::to_string(c.hermiticity_error) + ", min eigenvalue " + std::to_string(c.min_eigenvalue));
}

SpinOps collective_spin_ops(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "N must be positive");
  const Index dim = n + 1;
  const double j = 0.5 * n;
  CMatrix sx = CMatrix::Zero(dim, dim);
  CMatrix sz = CMatrix::Zero(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    const double m = -j + static_cast<double>(k);
    sz(k, k) = m;
    if (k + 1 < dim) {
      // <m+1| S_+ |m> / 2
      const double el = 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
      sx(k + 1, k) = el;
      sx(k, k + 1) = el;
    }
  }
  const SpaceKind space = SpaceKind::dicke(n);
  return SpinOps{DenseOperator(space, std::move(sx)), DenseOperator(space, std::move(sz))};
}

DenseOperator collective_spin_y(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "N must be positive");
  const Index dim = n + 1;
  const double j = 0.5 * n;
  CMatrix sy = CMatrix::Zero(dim, dim);
  for (Index k = 0; k + 1 < dim; ++k) {
    const double m = -j + static_cast<double>(k);
    const double el = 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    // S_y = (S_+ - S_-)/(2i)
    sy(k + 1, k) = Complex(0.0, -el);
    sy(k, k + 1) = Complex(0.0, el);
  }
  return DenseOperator(SpaceKind::dicke(n), std::move(sy));
}

SpinOps product_spin_ops(int n, int cap) {
  require(n >= 1, ErrorCode::InvalidArgument, "N must be positive");
  if (n > cap) fail(ErrorCode::ResourceLimit, "product space limited to N <= " + std::to_string(cap));
  const Index dim = Index{1} << n;
  CMatrix vx = CMatrix::Zero(dim, dim);
  CMatrix hz = CMatrix::Zero(dim, dim);
  for (Index s = 0; s < dim; ++s) {
    double z = 0.0;
    for (int q = 0; q < n; ++q) {
      const Index bit = Index{1} << q;
      z += (s & bit) ? 0.5 : -0.5;
      vx(s ^ bit, s) += 0.5;
    }
    hz(s, s) = z;
  }
  const SpaceKind space = SpaceKind::full_product(n);
  return SpinOps{DenseOperator(space, std::move(vx)), DenseOperator(space, std::move(hz))};
}

DenseOperator engine_hamiltonian(const EngineParams& params, double t, const SpaceKind& kind) {
  if (!kind.is_engine()) fail(ErrorCode::InvalidSpace, "engine Hamiltonian needs a Dicke or product space");
  const int n = static_cast<int>(kind.size());
  require(n == params.n, ErrorCode::InvalidSpace, "space atom count differs from EngineParams.N");
  const SpinOps ops = kind.tag() == SpaceKind::Tag::DickeSector ? collective_spin_ops(n) : product_spin_ops(n);
  const double w = omega_of_t(params, t);
  return DenseOperator(kind, 2.0 * w * ops.sz.matrix + 2.0 * params.delta * ops.sx.matrix);
}

QuantumState thermal_state(const DenseOperator& h, double beta) {
  require(h.is_hermitian(), ErrorCode::InvalidArgument, "thermal state needs a Hermitian Hamiltonian");
  require(beta >= 0.0, ErrorCode::InvalidArgument, "inverse temperature must be non-negative");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix);
  const RVector& ev = es.eigenvalues();
  const double e0 = ev.minCoeff();
  RVector w(ev.size());
  if (std::isinf(beta)) {
    const double tol = 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (Index k = 0; k < ev.size(); ++k) w(k) = (ev(k) - e0 <= tol) ? 1.0 : 0.0;
  } else {
    for (Index k = 0; k < ev.size(); ++k) w(k) = std::exp(-beta * (ev(k) - e0));
  }
  w /= w.sum();
  const CMatrix& v = es.eigenvectors();
  CMatrix rho = v * w.cast<Complex>().asDiagonal() * v.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuantumState(h.space, std::move(rho));
}

InstantaneousBasis instantaneous_eigenbasis(const EngineParams& params, double t, int n) {
  const double theta = mixing_angle(params, t);
  const double energy = gap_energy(params, t);
  // exp(-i phi S_y) is real; -i S_y is the real antisymmetric generator.
  const RMatrix gen = (Complex(0.0, -1.0) * collective_spin_y(n).matrix).real();
  const double phi = theta + 0.5 * std::numbers::pi;
  RMatrix rot = (phi * gen).exp();
  for (Index c = 0; c < rot.cols(); ++c) {
    for (Index r = 0; r < rot.rows(); ++r) {
      if (std::abs(rot(r, c)) > 1e-14) {
        if (rot(r, c) < 0.0) rot.col(c) *= -1.0;
        break;
      }
    }
  }
  return InstantaneousBasis{theta, energy, DenseOperator(SpaceKind::dicke(n), rot.cast<Complex>())};
}

CMatrix unitary_exponential(const CMatrix& h, double tau) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CVector phases = (es.eigenvalues() * (-tau)).unaryExpr([](double a) { return std::polar(1.0, a); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Complex expectation(const DenseOperator& op, const QuantumState& state) {
  require(op.space == state.space, ErrorCode::InvalidSpace, "operator and state live on different spaces");
  return (op.matrix * state.rho).trace();
}

QuantumState trace_out_engine(const QuantumState& state) {
  const SpaceKind& sys = state.space.system();
  const Index de = state.space.engine().dim();
  const Index ds = sys.dim();
  CMatrix out = CMatrix::Zero(ds, ds);
  for (Index e = 0; e < de; ++e) out += state.rho.block(e * ds, e * ds, ds, ds);
  return QuantumState(sys, std::move(out));
}

QuantumState trace_out_system(const QuantumState& state) {
  const SpaceKind& eng = state.space.engine();
  const Index de = eng.dim();
  const Index ds = state.space.system().dim();
  CMatrix out(de, de);
  for (Index a = 0; a < de; ++a)
    for (Index b = 0; b < de; ++b) out(a, b) = state.rho.block(a * ds, b * ds, ds, ds).trace();
  return QuantumState(eng, std::move(out));
}

}  // namespace qstat

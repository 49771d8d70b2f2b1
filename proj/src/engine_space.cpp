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

#include "qstat/engine_space.hpp"

#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qstat/errors.hpp"
#include "qstat/hilbert.hpp"

namespace qstat {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

CMatrix dense_exponential(const RMatrix& h, double tau) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
  const CVector ph = (es.eigenvalues() * (-tau)).unaryExpr([](double a) { return std::polar(1.0, a); });
  const CMatrix v = es.eigenvectors().cast<Complex>();
  return v * ph.asDiagonal() * v.transpose();
}

std::vector<double> boltzmann(const RVector& energies, double beta) {
  std::vector<double> w(static_cast<std::size_t>(energies.size()));
  const double e0 = energies.minCoeff();
  double z = 0.0;
  for (Index k = 0; k < energies.size(); ++k) {
    const double de = energies(k) - e0;
    w[static_cast<std::size_t>(k)] = std::isinf(beta) ? (de <= 1e-12 * (1.0 + std::abs(e0)) ? 1.0 : 0.0)
                                                       : std::exp(-beta * de);
    z += w[static_cast<std::size_t>(k)];
  }
  for (double& x : w) x /= z;
  return w;
}

}  // namespace

EngineOp EngineOp::compose(const EngineOp& after, const EngineOp& before) {
  EngineOp r;
  r.per_site = after.per_site;
  r.sites = after.sites;
  if (after.per_site) {
    r.site = after.site * before.site;
  } else {
    r.dense = after.dense * before.dense;
  }
  return r;
}

void EngineOp::apply(Complex* data, Index dim, Index cols) const {
  if (!per_site) {
    Eigen::Map<RowCMatrix> m(data, dim, cols);
    m = (dense * m).eval();
    return;
  }
  const Complex u00 = site(0, 0), u01 = site(0, 1), u10 = site(1, 0), u11 = site(1, 1);
  for (int q = 0; q < sites; ++q) {
    const Index bit = Index{1} << q;
    for (Index a = 0; a < dim; ++a) {
      if (a & bit) continue;
      Complex* r0 = data + a * cols;
      Complex* r1 = data + (a | bit) * cols;
      for (Index c = 0; c < cols; ++c) {
        const Complex x0 = r0[c];
        const Complex x1 = r1[c];
        r0[c] = u00 * x0 + u01 * x1;
        r1[c] = u10 * x0 + u11 * x1;
      }
    }
  }
}

double EngineOp::unitarity_error() const {
  if (per_site) {
    const Eigen::Matrix2cd d = site.adjoint() * site - Eigen::Matrix2cd::Identity();
    // Error of the N-fold product grows at most linearly in the sites.
    return sites * d.cwiseAbs().maxCoeff();
  }
  return (dense.adjoint() * dense - CMatrix::Identity(dense.rows(), dense.cols())).cwiseAbs().maxCoeff();
}

EngineBlock EngineBlock::spin(int two_j) {
  require(two_j >= 0, ErrorCode::InvalidArgument, "spin block needs j >= 0");
  EngineBlock b;
  b.size_ = two_j;
  if (two_j == 0) {
    b.lambda_ = RVector::Zero(1);
    b.sx_w_ = RVector::Zero(1);
    b.sz_w_ = RMatrix::Zero(1, 1);
    return b;
  }
  const SpinOps ops = collective_spin_ops(two_j);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(ops.sx.matrix.real());
  const RMatrix& w = es.eigenvectors();
  b.sx_w_ = es.eigenvalues();
  b.lambda_ = 2.0 * b.sx_w_;
  b.sz_w_ = w.transpose() * ops.sz.matrix.real() * w;
  return b;
}

EngineBlock EngineBlock::product(int n) {
  require(n >= 1 && n <= 16, ErrorCode::ResourceLimit, "product block limited to 1 <= N <= 16");
  EngineBlock b;
  b.product_ = true;
  b.size_ = n;
  const Index dim = Index{1} << n;
  b.lambda_.resize(dim);
  for (Index a = 0; a < dim; ++a) b.lambda_(a) = n - 2.0 * std::popcount(static_cast<unsigned long long>(a));
  return b;
}

Index EngineBlock::dim() const { return product_ ? (Index{1} << size_) : size_ + 1; }

Eigen::Matrix2cd EngineBlock::site_hamiltonian(double omega, double delta) const {
  // Single site Omega sigma_z + Delta sigma_x in the sigma_x eigenbasis
  // (|x+>, |x->), where sigma_z acts as -sigma_x.
  Eigen::Matrix2cd h;
  h << delta, -omega, -omega, -delta;
  return h;
}

EngineOp EngineBlock::step(double omega, double delta, double tau) const {
  EngineOp op;
  if (product_) {
    op.per_site = true;
    op.sites = size_;
    const double e = std::hypot(omega, delta);
    const Eigen::Matrix2cd h = site_hamiltonian(omega, delta);
    if (e == 0.0) {
      op.site.setIdentity();
    } else {
      op.site = std::cos(tau * e) * Eigen::Matrix2cd::Identity() - kI * (std::sin(tau * e) / e) * h;
    }
    return op;
  }
  op.dense = dense_exponential(hamiltonian(omega, delta).real(), tau);
  return op;
}

EngineOp EngineBlock::identity() const {
  EngineOp op;
  op.per_site = product_;
  op.sites = product_ ? size_ : 0;
  if (!product_) op.dense = CMatrix::Identity(dim(), dim());
  return op;
}

CMatrix EngineBlock::hamiltonian(double omega, double delta) const {
  if (!product_) {
    RMatrix h = 2.0 * omega * sz_w_;
    h.diagonal() += 2.0 * delta * sx_w_;
    return h.cast<Complex>();
  }
  const Index dim = this->dim();
  const Eigen::Matrix2cd hs = site_hamiltonian(omega, delta);
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int q = 0; q < size_; ++q) {
    const Index bit = Index{1} << q;
    for (Index a = 0; a < dim; ++a) {
      const int ba = (a & bit) ? 1 : 0;
      h(a, a) += hs(ba, ba);
      h(a ^ bit, a) += hs(1 - ba, ba);
    }
  }
  return h;
}

std::vector<GibbsMember> EngineBlock::gibbs(double omega, double delta, double beta) const {
  require(beta >= 0.0, ErrorCode::InvalidArgument, "inverse temperature must be non-negative");
  std::vector<GibbsMember> out;
  if (!product_) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(hamiltonian(omega, delta).real());
    const std::vector<double> w = boltzmann(es.eigenvalues(), beta);
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] > 0.0) out.push_back({w[k], es.eigenvectors().col(static_cast<Index>(k)).cast<Complex>()});
    }
    return out;
  }
  const double e = std::hypot(omega, delta);
  require(e > 0.0, ErrorCode::DegenerateHamiltonian, "engine gap vanishes");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(site_hamiltonian(omega, delta));
  const Eigen::Vector2cd ground = es.eigenvectors().col(0);
  const Eigen::Vector2cd excited = es.eigenvectors().col(1);
  RVector site_e(2);
  site_e << -e, e;
  const std::vector<double> ps = boltzmann(site_e, beta);
  const Index dim = this->dim();
  for (int k = 0; k <= size_; ++k) {
    const double w = binomial(size_, k) * std::pow(ps[1], k) * std::pow(ps[0], size_ - k);
    if (w <= 0.0) continue;
    CVector v(dim);
    for (Index a = 0; a < dim; ++a) {
      Complex amp = 1.0;
      for (int q = 0; q < size_; ++q) {
        const int bit = (a >> q) & 1;
        amp *= (q < k) ? excited(bit) : ground(bit);
      }
      v(a) = amp;
    }
    out.push_back({w, std::move(v)});
  }
  return out;
}

std::vector<WeightedBlock> spin_sector_decomposition(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "N must be positive");
  std::vector<WeightedBlock> out;
  for (int k = 0; 2 * k <= n; ++k) {
    const double mult = binomial(n, k) - binomial(n, k - 1);
    if (mult > 0.0) out.push_back({EngineBlock::spin(n - 2 * k), mult});
  }
  return out;
}

}  // namespace qstat

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

#pragma once

#include <vector>

#include "qstat/types.hpp"

namespace qstat {

/// Unitary acting on an engine block, stored either as one 2x2 matrix applied
/// to every site of a product space or as a dense matrix.
struct EngineOp {
  bool per_site = false;
  int sites = 0;
  Eigen::Matrix2cd site = Eigen::Matrix2cd::Identity();
  CMatrix dense;

  /// `after * before`; `before` acts first.
  static EngineOp compose(const EngineOp& after, const EngineOp& before);
  /// Applies the op to the row index of a row-major (dim x cols) block.
  void apply(Complex* data, Index dim, Index cols) const;
  /// max |U^dagger U - I|
  double unitarity_error() const;
};

struct GibbsMember {
  double weight;
  CVector vec;
};

/// Engine Hilbert space used by the propagator, represented in the eigenbasis
/// of the coupling operator V_R so that the coupling exponential is diagonal.
///
/// Spin blocks carry the collective operators of spin j = two_j/2; the Dicke
/// sector is j = N/2. A product block is the full 2^N space of N sites; its
/// Gibbs ensemble is reduced to one representative per number of excited
/// sites, which is exact because every operator involved is symmetric under
/// site permutations and only system observables are measured.
class EngineBlock {
 public:
  static EngineBlock spin(int two_j);
  static EngineBlock product(int n);

  bool is_product() const { return product_; }
  int size() const { return size_; }
  Index dim() const;
  /// Eigenvalues of V_R, one per basis state.
  const RVector& coupling_eigenvalues() const { return lambda_; }

  /// exp(-i tau H_E) for H_E = 2 Omega S_z + 2 Delta S_x.
  EngineOp step(double omega, double delta, double tau) const;
  EngineOp identity() const;
  std::vector<GibbsMember> gibbs(double omega, double delta, double beta) const;
  /// Dense H_E in the coupling basis.
  CMatrix hamiltonian(double omega, double delta) const;

 private:
  EngineBlock() = default;
  Eigen::Matrix2cd site_hamiltonian(double omega, double delta) const;

  bool product_ = false;
  int size_ = 0;
  RVector lambda_;
  RMatrix sz_w_;  // S_z in the coupling basis (spin blocks)
  RVector sx_w_;  // S_x eigenvalues (spin blocks)
};

struct WeightedBlock {
  EngineBlock block;
  double multiplicity;
};

/// Multiplicities of spin j = N/2 - k in N spin-1/2 sites.
std::vector<WeightedBlock> spin_sector_decomposition(int n);

}  // namespace qstat

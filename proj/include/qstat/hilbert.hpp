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

#include "qstat/protocols.hpp"
#include "qstat/types.hpp"

namespace qstat {

inline constexpr int kDefaultProductCap = 12;

struct SpinOps {
  DenseOperator sx;
  DenseOperator sz;
};

/// Spin-N/2 representation, basis ordered m = -N/2 ... +N/2.
SpinOps collective_spin_ops(int n);
DenseOperator collective_spin_y(int n);

/// Sum_j sigma_{j,x}/2 and Sum_j sigma_{j,z}/2 on the 2^N product space. Site j
/// maps to bit j of the basis index; a clear bit is the lower level.
SpinOps product_spin_ops(int n, int cap = kDefaultProductCap);

/// H_E(t) = 2 Omega(t) S_z + 2 Delta S_x on a Dicke or product space.
DenseOperator engine_hamiltonian(const EngineParams& params, double t, const SpaceKind& kind);

/// exp(-beta H)/Z in the eigenbasis of H; beta = +inf gives the uniformly
/// mixed ground space.
QuantumState thermal_state(const DenseOperator& h, double beta);

struct InstantaneousBasis {
  double theta;
  double energy;
  /// Columns |m, theta_t>, ordered by m, first nonzero entry real positive.
  DenseOperator basis;
};

InstantaneousBasis instantaneous_eigenbasis(const EngineParams& params, double t, int n);

/// exp(-i tau H) for Hermitian H.
CMatrix unitary_exponential(const CMatrix& h, double tau);
CMatrix kron(const CMatrix& a, const CMatrix& b);
Complex expectation(const DenseOperator& op, const QuantumState& state);
/// Tr_E and Tr_S of a state on a composite space.
QuantumState trace_out_engine(const QuantumState& state);
QuantumState trace_out_system(const QuantumState& state);

}  // namespace qstat

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

#include <complex>
#include <limits>
#include <memory>
#include <string>

#include <Eigen/Dense>

namespace qstat {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using RowCMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Hilbert space descriptor. Dimensions: Dicke sector N+1, full product 2^N,
/// truncated oscillator `dim`, generic `dim`, composite engine x system.
class SpaceKind {
 public:
  enum class Tag { DickeSector, FullProduct, HOTruncated, Generic, Composite };

  static SpaceKind dicke(int n);
  static SpaceKind full_product(int n);
  static SpaceKind ho_truncated(Index dim);
  static SpaceKind generic(Index dim);
  static SpaceKind composite(const SpaceKind& engine, const SpaceKind& system);

  Tag tag() const { return tag_; }
  /// Atom count for engine spaces, dimension for system spaces.
  Index size() const { return size_; }
  Index dim() const;
  const SpaceKind& engine() const;
  const SpaceKind& system() const;
  bool is_engine() const { return tag_ == Tag::DickeSector || tag_ == Tag::FullProduct; }

  std::string describe() const;
  bool operator==(const SpaceKind& other) const;

 private:
  struct Parts;
  SpaceKind(Tag tag, Index size, std::shared_ptr<const Parts> parts = nullptr);

  Tag tag_;
  Index size_;
  std::shared_ptr<const Parts> parts_;
};

/// Square complex matrix tied to a space. Energies are in units with hbar = 1.
struct DenseOperator {
  DenseOperator(SpaceKind space, CMatrix matrix);

  SpaceKind space;
  CMatrix matrix;

  Index dim() const { return matrix.rows(); }
  /// max |A - A^dagger|
  double hermiticity_error() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_error() <= tol; }
};

struct StateCheck {
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  bool ok(double trace_tol = 1e-10, double herm_tol = 1e-10, double psd_tol = 1e-9) const {
    return trace_error <= trace_tol && hermiticity_error <= herm_tol && min_eigenvalue >= -psd_tol;
  }
};

/// Density matrix on a declared space.
struct QuantumState {
  QuantumState(SpaceKind space, CMatrix rho);

  SpaceKind space;
  CMatrix rho;

  Index dim() const { return rho.rows(); }
  StateCheck check() const;
  /// Throws NumericalFailure when any density-matrix invariant is violated.
  void validate(double trace_tol = 1e-10, double herm_tol = 1e-10, double psd_tol = 1e-9) const;
};

}  // namespace qstat

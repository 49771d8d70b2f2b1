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

#include <cmath>

namespace qstat::detail {

// With Z = sinh((N+1)x)/sinh(x):
//   <m>   = -(1/2) [(N+1) L((N+1)x) - L(x)],        L(y) = coth y - 1/y
//   Var m =  (1/4) [Q(x) - (N+1)^2 Q((N+1)x)],       Q(y) = csch^2 y - 1/y^2
// The 1/y poles cancel analytically, and L, Q themselves are computed from
// series with positive terms wherever the direct form would cancel.

inline constexpr double kSeriesEdge = 2.0;

// sinh(y) - y for y >= 0.
inline double sinh_minus_y(double y) {
  if (y >= kSeriesEdge) return std::sinh(y) - y;
  const double y2 = y * y;
  double u = y * y2 / 6.0;
  double sum = 0.0;
  for (int k = 1; k < 60 && u > 1e-18 * sum; ++k) {
    sum += u;
    u *= y2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return sum;
}

inline double langevin(double y) {
  if (y == 0.0) return 0.0;
  if (y >= kSeriesEdge) return 1.0 / std::tanh(y) - 1.0 / y;
  // y cosh y - sinh y = sum_k 2k y^(2k+1)/(2k+1)!
  const double y2 = y * y;
  double u = y * y2 / 6.0;
  double num = 0.0;
  for (int k = 1; k < 60; ++k) {
    const double term = 2.0 * k * u;
    num += term;
    if (term <= 1e-18 * num) break;
    u *= y2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return num / (y * std::sinh(y));
}

inline double csch2_minus_inv2(double y) {
  if (y == 0.0) return -1.0 / 3.0;
  if (y <= 20.0) {
    const double s = std::sinh(y);
    return -sinh_minus_y(y) * (s + y) / (y * y * s * s);
  }
  const double e = std::exp(-2.0 * y);
  return 4.0 * e / ((1.0 - e) * (1.0 - e)) - 1.0 / (y * y);
}

}  // namespace qstat::detail

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

#include <cmath>

#include "qstat/analytics.hpp"
#include "special.hpp"

namespace qstat {

namespace {

using detail::csch2_minus_inv2;
using detail::langevin;

void check_domain(int n, double x) {
  require(n >= 1, ErrorCode::InvalidArgument, "N must be positive");
  require(x >= 0.0, ErrorCode::DomainError, "moments need x >= 0");
}

}  // namespace

double moment_h(int n, double x) {
  check_domain(n, x);
  if (std::isinf(x)) return -0.5 * n;
  const double k = n + 1.0;
  return -0.5 * (k * langevin(k * x) - langevin(x));
}

double moment_variance(int n, double x) {
  check_domain(n, x);
  if (std::isinf(x)) return 0.0;
  const double k = n + 1.0;
  return 0.25 * (csch2_minus_inv2(x) - k * k * csch2_minus_inv2(k * x));
}

double moment_f(int n, double x) {
  const double h = moment_h(n, x);
  return moment_variance(n, x) + h * h;
}

MomentSet moments(int n, double x) {
  MomentSet m;
  m.n = n;
  m.x = x;
  m.h = moment_h(n, x);
  m.f = moment_variance(n, x) + m.h * m.h;
  m.f_plus = m.f + m.h;
  m.f_minus = m.f - m.h;
  return m;
}

double moment_f_sinh_ratio(int n, double x) {
  check_domain(n, x);
  const double dn = n;
  const double num = dn * dn * std::sinh((dn + 3.0) * x) + (dn + 2.0) * (dn + 2.0) * std::sinh((dn - 1.0) * x) -
                     2.0 * (dn * dn + 2.0 * dn - 2.0) * std::sinh((dn + 1.0) * x);
  const double s = std::sinh(x);
  return num / (16.0 * std::sinh((dn + 1.0) * x) * s * s);
}

double moment_h_sinh_ratio(int n, double x) {
  check_domain(n, x);
  const double dn = n;
  const double num = (dn + 2.0) * std::sinh(dn * x) - dn * std::sinh((dn + 2.0) * x);
  return 0.25 * num / (std::sinh(x) * std::sinh((dn + 1.0) * x));
}

}  // namespace qstat

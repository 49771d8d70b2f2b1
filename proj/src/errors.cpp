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

#include "qstat/errors.hpp"

namespace qstat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidSpace: return "invalid-space";
    case ErrorCode::InvalidVariant: return "invalid-variant";
    case ErrorCode::DomainError: return "domain-error";
    case ErrorCode::DegenerateHamiltonian: return "degenerate-hamiltonian";
    case ErrorCode::ResourceLimit: return "resource-limit";
    case ErrorCode::NumericalFailure: return "numerical-failure";
    case ErrorCode::InequalityViolation: return "inequality-violation";
    case ErrorCode::ConfigError: return "config-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qstat

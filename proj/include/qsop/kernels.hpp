// Copyright 2026 The qsop-lab Authors
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

#include <Eigen/Dense>

#include "qsop/linear_optics.hpp"

namespace qsop {

/// Dense matrix of the circuit on the truncated Fock space, columns indexed
/// by FockBasis(input), rows by FockBasis(output). Built by applying the
/// circuit to every basis state.
Eigen::MatrixXcd fock_matrix_serial(const ModeCircuit& circuit);

/// Same result, columns computed in parallel with OpenMP.
Eigen::MatrixXcd fock_matrix_omp(const ModeCircuit& circuit);

inline Eigen::MatrixXcd fock_matrix(const ModeCircuit& circuit) {
  return fock_matrix_omp(circuit);
}

}  // namespace qsop

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

#include "qsop/kernels.hpp"

#include <omp.h>

namespace qsop {

namespace {

void fill_column(const ModeCircuit& c, const FockBasis& in, const FockBasis& out, std::size_t col,
                 Eigen::MatrixXcd& m) {
  const StateVector image = apply(c, StateVector::basis(in.reg(), in[col]));
  for (const auto& [occ, amp] : image.amplitudes()) {
    m(static_cast<Eigen::Index>(*out.index_of(occ)), static_cast<Eigen::Index>(col)) = amp;
  }
}

}  // namespace

Eigen::MatrixXcd fock_matrix_serial(const ModeCircuit& circuit) {
  const FockBasis in(circuit.input());
  const FockBasis out(circuit.output().with_max_photons(circuit.input().max_photons()));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(out.size()),
                                              static_cast<Eigen::Index>(in.size()));
  for (std::size_t col = 0; col < in.size(); ++col) fill_column(circuit, in, out, col, m);
  return m;
}

Eigen::MatrixXcd fock_matrix_omp(const ModeCircuit& circuit) {
  const FockBasis in(circuit.input());
  const FockBasis out(circuit.output().with_max_photons(circuit.input().max_photons()));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(out.size()),
                                              static_cast<Eigen::Index>(in.size()));
  const auto n = static_cast<long>(in.size());
  // Columns are disjoint, so the writes never race.
#pragma omp parallel for schedule(dynamic)
  for (long col = 0; col < n; ++col) {
    fill_column(circuit, in, out, static_cast<std::size_t>(col), m);
  }
  return m;
}

}  // namespace qsop

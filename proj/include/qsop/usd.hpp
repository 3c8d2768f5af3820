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

namespace qsop {

/// Unambiguous discrimination of (cos t, +-sin t).
///
/// Ancilla: the qubit is joined by a two-level ancilla (index 2*anc + q)
/// and a 4x4 unitary is applied. Embedded: the qubit already lives in a
/// three-level space and Bob applies the 3x3 block directly.
enum class UsdVariant { Ancilla, Embedded };

struct UsdDistribution {
  double conclusive0 = 0.0;
  double conclusive1 = 0.0;
  double inconclusive = 0.0;
};

Eigen::MatrixXd usd_unitary(double theta, UsdVariant variant);

/// Input state for bit 0 or 1 in the variant's space.
Eigen::VectorXcd usd_input(double theta, int bit, UsdVariant variant);

/// Throws std::invalid_argument unless 0 <= theta <= pi/4.
UsdDistribution usd_measure(double theta, UsdVariant variant, const Eigen::VectorXcd& input);

}  // namespace qsop

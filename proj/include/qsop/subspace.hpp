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

#include <span>
#include <vector>

#include "qsop/fock.hpp"

namespace qsop {

/// Residual norm below which a vector is treated as linearly dependent.
/// Looser than kOrthTolerance so rounding never inflates a rank.
inline constexpr double kRankTolerance = 1e-7;

/// A linear span held as an orthonormal basis.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(ModeRegister reg) : reg_(std::move(reg)) {}
  /// Validates pairwise orthonormality to kOrthTolerance.
  Subspace(ModeRegister reg, std::vector<PureState> basis);

  const ModeRegister& reg() const { return reg_; }
  const std::vector<PureState>& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }

  StateVector project(const StateVector& v) const;
  /// || v - P v ||
  double residual(const StateVector& v) const;
  bool contains(const StateVector& v, double tol = kOrthTolerance) const {
    return residual(v) < tol;
  }

  /// The same span expressed on a register containing every mode of reg().
  Subspace embedded(const ModeRegister& target) const;

 private:
  ModeRegister reg_;
  std::vector<PureState> basis_;
};

/// Gram-Schmidt with a second re-orthogonalization pass. Inputs are
/// normalized first; anything whose residual falls below `tol` is dropped,
/// so dim() is the numerical rank of the set.
Subspace orthonormalize(const ModeRegister& reg, std::span<const StateVector> states,
                        double tol = kRankTolerance);
Subspace orthonormalize(const ModeRegister& reg, std::span<const PureState> states,
                        double tol = kRankTolerance);

/// Support of the reduced state on `kept` for a pure state.
///
/// Writes |psi> = sum_b |v_b>_kept |b>_rest over Fock states b of the
/// discarded modes and orthonormalizes the non-zero v_b. For a pure state
/// this is exactly the support of the partial trace.
Subspace traced_support(const StateVector& state, std::span<const ModeLabel> kept,
                        double tol = kRankTolerance);

/// Both spans contain each other's basis vectors.
bool same_span(const Subspace& a, const Subspace& b, double tol = kOrthTolerance);

/// Union of several spans over one register.
Subspace span_union(const ModeRegister& reg, std::span<const Subspace> parts,
                    double tol = kRankTolerance);

}  // namespace qsop

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
#include <string>
#include <vector>

#include "qsop/linear_optics.hpp"
#include "qsop/subspace.hpp"

namespace qsop {

/// One of Bob's measurement configurations: a circuit, the orthonormal
/// outcome states on its output register, and the vacuum modes Bob adds.
struct BobSetup {
  std::string name;
  ModeCircuit circuit;
  std::vector<PureState> measured_states;
  std::vector<ModeLabel> bob_ancilla_modes;

  /// Throws std::invalid_argument when the outcome states are not
  /// orthonormal or an ancilla is not a circuit input.
  void validate() const;
};

/// Every Fock state of `output` with photons only in `monitored` modes and
/// at most `max_photons` of them, vacuum included.
std::vector<PureState> measured_basis(const ModeRegister& output,
                                      std::span<const ModeLabel> monitored, int max_photons);

/// Span of the states Alice actually emits.
Subspace alice_space(std::span<const PureState> alice_states);

/// Span of U^-1 |phi_k> over every setup and outcome, on the shared input
/// register of the setups.
Subspace reversed_space(std::span<const BobSetup> setups);

struct SetupContribution {
  std::string setup;
  std::vector<Subspace> traced;  // one per measured state, on the channel register
};

struct QsopReport {
  Subspace h_a;
  Subspace h_b_inv;
  Subspace h_p;
  std::vector<SetupContribution> contributions;
};

/// Quantum space of the protocol on the channel register `channel`: the
/// span of Alice's states together with the support, after discarding Bob's
/// ancillas, of every reversed outcome state.
///
/// Every circuit input must be either a channel mode or a declared Bob
/// ancilla, the two sets must be disjoint, and all setups must declare the
/// same ancillas.
QsopReport compute_qsop(std::span<const PureState> alice_states, std::span<const BobSetup> setups,
                        const ModeRegister& channel);

}  // namespace qsop

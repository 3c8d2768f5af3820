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

#include <vector>

#include "qsop/linear_optics.hpp"

namespace qsop {

ModeLabel alice_mode(int t);  // a@t, the pulse sent into the interferometer
ModeLabel bob_mode(int t);    // b@t, vacuum at the second input port
ModeLabel s_mode(int t);      // straight output arm
ModeLabel d_mode(int t);      // down output arm

/// Unbalanced Mach-Zehnder interferometer for time-bin qubits.
struct Interferometer {
  int first_bin = 0;
  int last_bin = 0;
  double phase = 0.0;
  ModeCircuit circuit;
  std::vector<ModeLabel> alice_arm;
  /// Vacuum inputs added inside Bob's lab: the b port for every bin plus the
  /// two arm modes at the edges of the delay line.
  std::vector<ModeLabel> bob_ancillas;
};

/// Pulses enter at bins first..last. Input register:
///   a@first..a@last, b@first..b@last, long@(first-1), short@(last+1)
/// Output register:
///   s@first..s@(last+1), d@first..d@(last+1)
/// The long arm is one bin longer and carries the phase shifter.
Interferometer unbalanced_interferometer(int first_bin, int last_bin, double phase,
                                         int max_photons = 1);

}  // namespace qsop

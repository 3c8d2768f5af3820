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

#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qsop/fock.hpp"

namespace qsop {

inline constexpr double kUnitarityTolerance = 1e-9;

/// Passive linear-optics network acting on creation operators.
///
/// Column convention: a_i^dagger -> sum_j U(j, i) b_j^dagger, where a_i is
/// mode i of the input register and b_j mode j of the output register.
class ModeCircuit {
 public:
  /// Throws std::invalid_argument when the registers differ in size or U is
  /// not unitary within kUnitarityTolerance.
  ModeCircuit(ModeRegister input, ModeRegister output, Eigen::MatrixXcd mode_matrix);

  static ModeCircuit identity(const ModeRegister& reg);

  const ModeRegister& input() const { return input_; }
  const ModeRegister& output() const { return output_; }
  const Eigen::MatrixXcd& matrix() const { return u_; }

  /// max |U^dagger U - I|
  double unitarity_deviation() const;

 private:
  ModeRegister input_;
  ModeRegister output_;
  Eigen::MatrixXcd u_;
};

/// 50:50 beam splitter; the reflected arm picks up a factor i.
ModeCircuit beam_splitter(const ModeRegister& reg, const ModeLabel& mode1,
                          const ModeLabel& mode2);

/// e^{i phi} on one mode; n photons pick up e^{i n phi}.
ModeCircuit phase_shifter(const ModeRegister& reg, const ModeLabel& mode, double phi);

/// 45 degree polarization rotation: H -> (H + V)/sqrt2, V -> (H - V)/sqrt2.
ModeCircuit pockels_rotation(const ModeRegister& reg, const ModeLabel& mode_h,
                             const ModeLabel& mode_v);

/// Moves `mode` by `bins` time-bins; every other mode keeps its label.
/// Throws when the shifted label is absent from `output`.
ModeCircuit delay(const ModeRegister& input, const ModeRegister& output, const ModeLabel& mode,
                  int bins);

/// Shifts several modes at once; the output register is derived from the
/// input by relabeling in place.
ModeCircuit delay(const ModeRegister& input, std::span<const ModeLabel> modes, int bins);

/// Permutation by label. Modes not in `renames` keep their label. Every
/// resulting label must exist in `output`, and the map must be a bijection.
ModeCircuit relabel(const ModeRegister& input, const ModeRegister& output,
                    const std::map<ModeLabel, ModeLabel>& renames);

/// `first` then `second`; requires first.output() to match second.input().
ModeCircuit compose(const ModeCircuit& first, const ModeCircuit& second);

ModeCircuit inverse(const ModeCircuit& circuit);

/// Applies the circuit by creation-operator substitution.
///
/// The state's register must contain every input mode of the circuit. Modes
/// of the state that the circuit does not touch are carried along unchanged
/// and come first in the output register, followed by circuit.output().
StateVector apply(const ModeCircuit& circuit, const StateVector& state);
PureState apply(const ModeCircuit& circuit, const PureState& state);

}  // namespace qsop

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

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsop/interferometer.hpp"
#include "qsop/qsop.hpp"

namespace qsop {

enum class Basis { Z, X, Y };
enum class Outcome { Bit0 = 0, Bit1 = 1, Loss = 2, Error = 3 };
inline constexpr std::size_t kOutcomeCount = 4;

std::string to_string(Basis b);
std::string to_string(Outcome o);
Basis parse_basis(std::string_view text);

enum class DetectorKind { Threshold, Counter };
enum class DoubleClickPolicy { Loss, Error };

std::string to_string(DetectorKind k);
std::string to_string(DoubleClickPolicy p);
DetectorKind parse_detector_kind(std::string_view text);
DoubleClickPolicy parse_double_click_policy(std::string_view text);

struct DetectorModel {
  DetectorKind kind = DetectorKind::Threshold;
  DoubleClickPolicy double_click = DoubleClickPolicy::Loss;
  bool operator==(const DetectorModel&) const = default;
};

/// A physical detector watching one or more output modes. `report` is what a
/// lone click means: a bit value, or Error for an anomaly window.
struct Detector {
  std::string name;
  std::vector<ModeLabel> modes;
  Outcome report = Outcome::Bit0;
};

struct ClickPattern {
  Outcome outcome = Outcome::Loss;
  int detectors_fired = 0;
  bool anomaly = false;  // a detector reporting Error fired
};

/// Maps photon counts on a circuit output register to an outcome.
///
/// Threshold: no click is a loss, one click is that detector's report, two
/// or more follow the double-click policy. Counter: a single photon in a
/// single detector is its report, vacuum is a loss, anything else is an
/// error.
class OutcomeInterpretation {
 public:
  OutcomeInterpretation(const ModeRegister& output, std::vector<Detector> detectors,
                        DetectorModel model);

  ClickPattern classify(const Occupation& occ) const;
  const std::vector<Detector>& detectors() const { return detectors_; }
  const DetectorModel& model() const { return model_; }
  std::vector<ModeLabel> monitored_modes() const;

 private:
  std::vector<Detector> detectors_;
  std::vector<std::vector<std::size_t>> positions_;
  DetectorModel model_;
};

struct MeasurementSetup {
  std::string name;
  Basis basis = Basis::Z;
  ModeCircuit circuit;
  std::vector<Detector> detectors;
  DetectorModel model;
  std::vector<ModeLabel> bob_ancillas;

  OutcomeInterpretation interpretation() const;
  /// Outcome states for the QSoP: all Fock states on the monitored modes up
  /// to the circuit's cutoff.
  BobSetup bob_setup() const;
};

/// Max deviation of sum_o U^dagger D_o U from the identity on the input
/// Fock space, where D_o projects onto output states classified as o.
double povm_completeness_deviation(const MeasurementSetup& setup);

/// Outcome probabilities of `state` (on the circuit input register, or a
/// register containing it).
std::array<double, kOutcomeCount> outcome_distribution(const MeasurementSetup& setup,
                                                       const StateVector& state);

struct Emission {
  double weight = 1.0;
  PureState state;
};

using Preparation = std::pair<Basis, int>;

/// Alice's state family. `states` holds the nominal pure state per basis
/// and bit; `emissions` the mixture actually sent, whose components span
/// Alice's realistic space.
struct AliceSource {
  std::string name;
  ModeRegister reg;
  std::vector<Basis> bases;
  std::map<Preparation, PureState> states;
  std::map<Preparation, std::vector<Emission>> emissions;

  /// Every emission component, in (basis, bit) order.
  std::vector<PureState> components() const;
  /// |<0|1>| within each basis.
  std::map<Basis, double> bit_overlaps() const;
};

ModeLabel pol_h(int t = 0);
ModeLabel pol_v(int t = 0);
ModeLabel tag_z();
ModeLabel tag_x();

ModeRegister polarization_register(int max_photons);

/// Single photons in H/V: z = {H, V}, x = {(H+V), (H-V)}/sqrt2.
AliceSource source_ideal_bb84(int max_photons = 1);
/// As above but each pulse is empty with probability `vacuum_weight`.
AliceSource source_vacuum_qubit(double vacuum_weight, int max_photons = 1);
/// Phase-randomized weak coherent pulses truncated at `max_photons`. With
/// `photon_number` set, only that Fock component is emitted.
AliceSource source_weak_coherent(Complex alpha, int max_photons,
                                 std::optional<int> photon_number = std::nullopt);
/// Polarization qubit plus two tag modes: |10> reveals z, |01> reveals x,
/// |00> reveals nothing. Tagged with probability `tag_probability`.
AliceSource source_tagging(double tag_probability);
/// Time-bin qubit over a@0, a@1.
AliceSource source_interferometric(const std::vector<Basis>& bases);

/// Coherent-state amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!), n = 0..L,
/// not renormalized.
std::vector<Complex> coherent_amplitudes(Complex alpha, int max_photons);

enum class InterferometricVariant { XY, XZ, XYZ };
std::string to_string(InterferometricVariant v);
InterferometricVariant parse_variant(std::string_view text);

/// z: identity; x: Pockels cell. Detector H reports 0, V reports 1.
MeasurementSetup setup_polarization(Basis basis, DetectorModel model, int max_photons);

/// x and y watch s@1 (bit 1) and d@1 (bit 0) with phase 0 and pi/2; z uses
/// phase 0 and watches d@0 (bit 0) and s@2 (bit 1). The xy variant spans
/// bins 0..1, the others -1..2.
MeasurementSetup setup_interferometric(InterferometricVariant variant, Basis basis,
                                       DetectorModel model = {});

/// Channel register of the interferometric variants: Alice's arm modes.
ModeRegister interferometric_channel(InterferometricVariant variant);

/// Three bins (-1, 0, 1) of H/V polarization. z watches bins 0 and 1, x
/// rotates and watches bins -1 and 0. `extended` adds anomaly detectors on
/// the remaining bin.
std::vector<MeasurementSetup> setup_fake_state_scenario(bool extended = false);
ModeRegister fake_state_register();
AliceSource source_fake_state();

}  // namespace qsop

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

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qsop/subspace.hpp"

namespace qsop {

/// One incoherent piece of an attacked round: `state` lives on
/// eve_register (x) channel and is unnormalized; `weight` is its classical
/// probability factor.
struct AttackComponent {
  double weight = 1.0;
  StateVector state;
  std::string branch;  // empty for isometries
};

struct OffendingPair {
  std::string kind;  // "inner-product", "leakage" or "completeness"
  std::size_t i = 0;
  std::size_t j = 0;
  double deviation = 0.0;
};

struct AttackCheck {
  double max_inner_product_deviation = 0.0;
  double max_leakage = 0.0;
  std::vector<OffendingPair> offending;
  bool passed() const { return offending.empty(); }
};

/// Per-round isometry on the QSoP, given by the image of each basis state
/// on eve_register (x) channel. Eve's register starts in its vacuum.
class AttackIsometry {
 public:
  AttackIsometry(Subspace qsop_basis, ModeRegister eve_register, std::vector<StateVector> images);

  const Subspace& qsop_basis() const { return basis_; }
  const ModeRegister& eve_register() const { return eve_; }
  const ModeRegister& output_register() const { return out_; }
  const std::vector<StateVector>& images() const { return images_; }

  /// Throws std::invalid_argument when `psi` has weight outside the QSoP.
  StateVector apply(const StateVector& psi) const;

  /// Inner products of the images against the identity, and the weight of
  /// each image outside eve (x) span(qsop basis).
  AttackCheck verify(double tol = kOrthTolerance) const;

 private:
  Subspace basis_;
  ModeRegister eve_;
  ModeRegister out_;
  std::vector<StateVector> images_;
};

/// K = sum_i |ket_i><bra_i| on the channel, with a one-hot Eve record.
struct KrausOperator {
  ModeLabel record;
  std::vector<std::pair<StateVector, StateVector>> terms;  // (ket, bra)
};

/// Eve picks a branch with probability `prior` and applies its
/// instrument; the result of each Kraus operator is kept in her record.
struct Branch {
  std::string name;
  double prior = 1.0;
  std::vector<KrausOperator> ops;
};

class MeasureResendChannel {
 public:
  MeasureResendChannel(Subspace support, ModeRegister eve_register, std::vector<Branch> branches);

  const Subspace& support() const { return support_; }
  const ModeRegister& eve_register() const { return eve_; }
  const std::vector<Branch>& branches() const { return branches_; }

  std::vector<AttackComponent> apply(const StateVector& psi) const;

  /// Per branch, max |sum K^dagger K - 1| on the support; offending entries
  /// name the branch in `i`. Every ket must stay on the channel register.
  AttackCheck verify(double tol = kOrthTolerance) const;

 private:
  Subspace support_;
  ModeRegister eve_;
  std::vector<Branch> branches_;
};

class Attack {
 public:
  Attack(std::string name, AttackIsometry isometry);
  Attack(std::string name, MeasureResendChannel channel);

  const std::string& name() const { return name_; }
  const ModeRegister& eve_register() const;
  const ModeRegister& channel() const;
  bool is_isometry() const { return std::holds_alternative<AttackIsometry>(impl_); }
  const AttackIsometry* isometry() const { return std::get_if<AttackIsometry>(&impl_); }
  const MeasureResendChannel* channel_attack() const {
    return std::get_if<MeasureResendChannel>(&impl_);
  }

  /// `psi` on the channel register.
  std::vector<AttackComponent> apply(const StateVector& psi) const;
  AttackCheck verify(double tol = kOrthTolerance) const;
  std::size_t qsop_dimension() const;

 private:
  std::string name_;
  std::variant<AttackIsometry, MeasureResendChannel> impl_;
};

/// Eve does nothing; her register is empty.
Attack attack_identity(const Subspace& qsop);

/// Photon-number splitting on the two-mode polarization space at two
/// photons: one photon of every multi-photon pulse is kept by Eve, single
/// photons are taken entirely (Bob sees vacuum).
Attack attack_pns();

/// Eve reads the tag. Tagged pulses are measured in the revealed basis and
/// resent; untagged ones pass.
Attack attack_tagging();

/// Eve measures z or x at random and resends `m` photons of her result.
Attack attack_trojan_pony(int m);

/// Eve measures z or x at random on bin 0 and resends at bin 1 after a z
/// measurement, at bin -1 after an x measurement.
Attack attack_fake_state();

/// Entangles Eve's two-level probe with the time-bin spread of a@0 and a@1
/// on the five-dimensional QSoP over a@-1..a@2. Other basis states pass with
/// Eve's probe in its vacuum.
Attack attack_reversed_space(const Subspace& qsop);

/// General isometry from explicit images.
Attack attack_matrix(std::string name, Subspace qsop, ModeRegister eve_register,
                     std::vector<StateVector> images);

ModeLabel eve_mode(const std::string& channel, int index = 0);

}  // namespace qsop

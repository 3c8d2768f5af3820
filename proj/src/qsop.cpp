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

#include "qsop/qsop.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qsop {

void BobSetup::validate() const {
  for (std::size_t i = 0; i < measured_states.size(); ++i) {
    if (!measured_states[i].reg().same_modes(circuit.output())) {
      throw std::invalid_argument("setup " + name + ": measured state not on circuit output");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(inner_product(measured_states[j], measured_states[i])) > kOrthTolerance) {
        throw std::invalid_argument("setup " + name + ": measured states are not orthogonal");
      }
    }
  }
  for (const auto& m : bob_ancilla_modes) {
    if (!circuit.input().contains(m)) {
      throw std::invalid_argument("setup " + name + ": ancilla " + m.str() +
                                  " is not a circuit input");
    }
  }
}

std::vector<PureState> measured_basis(const ModeRegister& output,
                                      std::span<const ModeLabel> monitored, int max_photons) {
  const ModeRegister sub = output.subset(monitored).with_max_photons(max_photons);
  const ModeRegister wide = output.with_max_photons(std::max(max_photons, output.max_photons()));
  std::vector<PureState> out;
  for (const auto& occ : enumerate_basis(sub)) {
    out.push_back(embed(PureState::basis(sub, occ), wide));
  }
  return out;
}

Subspace alice_space(std::span<const PureState> alice_states) {
  if (alice_states.empty()) throw std::invalid_argument("alice_space: no states");
  return orthonormalize(alice_states.front().reg(), alice_states);
}

namespace {

std::vector<StateVector> reversed_images(const BobSetup& s) {
  s.validate();
  const ModeCircuit inv = inverse(s.circuit);
  std::vector<StateVector> out;
  for (const auto& phi : s.measured_states) {
    out.push_back(apply(inv, embed(phi, inv.input().with_max_photons(phi.reg().max_photons()))
                                 .vector()));
  }
  return out;
}

}  // namespace

Subspace reversed_space(std::span<const BobSetup> setups) {
  if (setups.empty()) throw std::invalid_argument("reversed_space: no setups");
  const ModeRegister& in = setups.front().circuit.input();
  std::vector<StateVector> all;
  int cutoff = in.max_photons();
  for (const auto& s : setups) {
    if (!s.circuit.input().same_modes(in)) {
      throw std::invalid_argument("reversed_space: setups differ in input register");
    }
    for (auto& v : reversed_images(s)) {
      cutoff = std::max(cutoff, v.reg().max_photons());
      all.push_back(std::move(v));
    }
  }
  const ModeRegister reg = in.with_max_photons(cutoff);
  for (auto& v : all) v = embed(v, reg);
  return orthonormalize(reg, all);
}

QsopReport compute_qsop(std::span<const PureState> alice_states, std::span<const BobSetup> setups,
                        const ModeRegister& channel) {
  if (setups.empty()) throw std::invalid_argument("qsop: no setups");
  const std::set<ModeLabel> ancillas(setups.front().bob_ancilla_modes.begin(),
                                     setups.front().bob_ancilla_modes.end());
  for (const auto& s : setups) {
    const std::set<ModeLabel> mine(s.bob_ancilla_modes.begin(), s.bob_ancilla_modes.end());
    if (mine != ancillas) {
      throw std::invalid_argument("qsop: setup " + s.name + " declares different Bob ancillas");
    }
    for (const auto& m : s.circuit.input().modes()) {
      const bool is_channel = channel.contains(m);
      const bool is_ancilla = ancillas.contains(m);
      if (is_channel && is_ancilla) {
        throw std::invalid_argument("qsop: mode " + m.str() + " is both channel and Bob ancilla");
      }
      if (!is_channel && !is_ancilla) {
        throw std::invalid_argument("qsop: circuit input " + m.str() +
                                    " is neither a channel mode nor a Bob ancilla");
      }
    }
  }

  QsopReport report;
  report.h_a = alice_space(alice_states);
  report.h_b_inv = reversed_space(setups);

  std::vector<StateVector> parts;
  for (const auto& b : report.h_a.basis()) parts.push_back(embed(b.vector(), channel));

  for (const auto& s : setups) {
    SetupContribution c{s.name, {}};
    std::vector<ModeLabel> kept;
    for (const auto& m : s.circuit.input().modes()) {
      if (channel.contains(m)) kept.push_back(m);
    }
    for (const auto& img : reversed_images(s)) {
      Subspace t = traced_support(img, kept);
      const ModeRegister target = channel.with_max_photons(
          std::max(channel.max_photons(), t.reg().max_photons()));
      Subspace on_channel = t.embedded(target);
      for (const auto& b : on_channel.basis()) parts.push_back(embed(b.vector(), channel));
      c.traced.push_back(std::move(on_channel));
    }
    report.contributions.push_back(std::move(c));
  }
  report.h_p = orthonormalize(channel, parts);
  return report;
}

}  // namespace qsop

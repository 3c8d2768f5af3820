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

#include "qsop/interferometer.hpp"

#include <stdexcept>

namespace qsop {

namespace {

ModeLabel short_arm(int t) { return {ModeKind::Arm, t, "short"}; }
ModeLabel long_arm(int t) { return {ModeKind::Arm, t, "long"}; }

}  // namespace

ModeLabel alice_mode(int t) { return {ModeKind::TimeBin, t, "a"}; }
ModeLabel bob_mode(int t) { return {ModeKind::TimeBin, t, "b"}; }
ModeLabel s_mode(int t) { return {ModeKind::TimeBin, t, "s"}; }
ModeLabel d_mode(int t) { return {ModeKind::TimeBin, t, "d"}; }

Interferometer unbalanced_interferometer(int first_bin, int last_bin, double phase,
                                         int max_photons) {
  if (last_bin < first_bin) throw std::invalid_argument("interferometer: empty bin range");
  const int f = first_bin, l = last_bin;

  std::vector<ModeLabel> alice_arm, bob_ancillas;
  for (int t = f; t <= l; ++t) alice_arm.push_back(alice_mode(t));
  for (int t = f; t <= l; ++t) bob_ancillas.push_back(bob_mode(t));
  bob_ancillas.push_back(long_arm(f - 1));
  bob_ancillas.push_back(short_arm(l + 1));
  std::vector<ModeLabel> in_modes = alice_arm;
  in_modes.insert(in_modes.end(), bob_ancillas.begin(), bob_ancillas.end());
  const ModeRegister r0(in_modes, max_photons);

  // First beam splitter; the transmitted part takes the short arm.
  ModeCircuit c = ModeCircuit::identity(r0);
  for (int t = f; t <= l; ++t) c = compose(c, beam_splitter(r0, alice_mode(t), bob_mode(t)));

  std::map<ModeLabel, ModeLabel> to_arms;
  std::vector<ModeLabel> r1_modes;
  for (int t = f; t <= l; ++t) {
    to_arms.emplace(alice_mode(t), short_arm(t));
    r1_modes.push_back(short_arm(t));
  }
  for (int t = f; t <= l; ++t) {
    to_arms.emplace(bob_mode(t), long_arm(t));
    r1_modes.push_back(long_arm(t));
  }
  r1_modes.push_back(long_arm(f - 1));
  r1_modes.push_back(short_arm(l + 1));
  const ModeRegister r1(r1_modes, max_photons);
  c = compose(c, relabel(r0, r1, to_arms));

  std::vector<ModeLabel> longs;
  for (int t = f - 1; t <= l; ++t) longs.push_back(long_arm(t));
  c = compose(c, delay(r1, longs, 1));
  const ModeRegister r2 = c.output();

  for (int t = f; t <= l + 1; ++t) c = compose(c, phase_shifter(r2, long_arm(t), phase));
  for (int t = f; t <= l + 1; ++t) c = compose(c, beam_splitter(r2, short_arm(t), long_arm(t)));

  std::map<ModeLabel, ModeLabel> to_outputs;
  std::vector<ModeLabel> s_modes, d_modes;
  for (int t = f; t <= l + 1; ++t) {
    to_outputs.emplace(short_arm(t), s_mode(t));
    to_outputs.emplace(long_arm(t), d_mode(t));
    s_modes.push_back(s_mode(t));
    d_modes.push_back(d_mode(t));
  }
  s_modes.insert(s_modes.end(), d_modes.begin(), d_modes.end());
  const ModeRegister r3(s_modes, max_photons);
  c = compose(c, relabel(r2, r3, to_outputs));

  return Interferometer{f, l, phase, std::move(c), std::move(alice_arm),
                        std::move(bob_ancillas)};
}

}  // namespace qsop

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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qsop/interferometer.hpp"

namespace qsop {
namespace {

const Complex kI(0.0, 1.0);
const double kPi = std::numbers::pi;

StateVector one(const ModeRegister& reg, const ModeLabel& m) {
  Occupation o(reg.size(), 0);
  o[reg.require(m)] = 1;
  return StateVector::basis(reg, o);
}

void expect_coeffs(const StateVector& got, const std::vector<std::pair<ModeLabel, Complex>>& want,
                   double scale) {
  StateVector w(got.reg());
  for (const auto& [m, c] : want) w += (c * scale) * one(got.reg(), m);
  EXPECT_LT((got - w).norm(), 1e-10) << format_state(got);
}

TEST(Interferometer, SinglePulse) {
  const auto ifm = unbalanced_interferometer(0, 0, 0.0);
  EXPECT_EQ(ifm.bob_ancillas.size(), 3u);
  const auto& in = ifm.circuit.input();
  const auto out = apply(ifm.circuit, one(in, alice_mode(0)));
  ASSERT_EQ(out.reg().modes(), (std::vector<ModeLabel>{s_mode(0), s_mode(1), d_mode(0), d_mode(1)}));
  EXPECT_NEAR(std::abs(out.amplitude({1, 0, 0, 0}) - 0.5), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(out.amplitude({0, 1, 0, 0}) + 0.5), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(out.amplitude({0, 0, 1, 0}) - 0.5 * kI), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(out.amplitude({0, 0, 0, 1}) - 0.5 * kI), 0.0, 1e-10);
}

TEST(Interferometer, SinglePulseAtAnyBin) {
  const auto ifm = unbalanced_interferometer(3, 3, 0.0);
  const auto out = apply(ifm.circuit, one(ifm.circuit.input(), alice_mode(3)));
  expect_coeffs(out, {{s_mode(3), 1.0}, {s_mode(4), -1.0}, {d_mode(3), kI}, {d_mode(4), kI}}, 0.5);
}

TEST(Interferometer, UnitaryToMachinePrecision) {
  for (double phi : {0.0, kPi / 2}) {
    EXPECT_LT(unbalanced_interferometer(-1, 2, phi).circuit.unitarity_deviation(), 1e-12);
  }
}

TEST(Interferometer, TimeBinBasisStates) {
  for (double phi : {0.0, kPi / 2, 0.37}) {
    const auto ifm = unbalanced_interferometer(0, 1, phi);
    EXPECT_EQ(ifm.bob_ancillas.size(), 4u);
    const auto& in = ifm.circuit.input();
    const Complex e = std::polar(1.0, phi);
    expect_coeffs(apply(ifm.circuit, one(in, alice_mode(0))),
                  {{s_mode(0), 1.0}, {s_mode(1), -e}, {d_mode(0), kI}, {d_mode(1), kI * e}}, 0.5);
    expect_coeffs(apply(ifm.circuit, one(in, alice_mode(1))),
                  {{s_mode(1), 1.0}, {s_mode(2), -e}, {d_mode(1), kI}, {d_mode(2), kI * e}}, 0.5);
    const auto vac = apply(ifm.circuit, StateVector::vacuum(in));
    EXPECT_NEAR(std::abs(vac.amplitude(Occupation(6, 0)) - 1.0), 0.0, 1e-15);
  }
}

TEST(Interferometer, GeneralQubit) {
  const double theta = 0.3, varphi = 1.1, phi = 0.6;
  const auto ifm = unbalanced_interferometer(0, 1, phi);
  const auto& in = ifm.circuit.input();
  const StateVector psi = Complex(std::cos(theta)) * one(in, alice_mode(0)) +
                          std::sin(theta) * std::polar(1.0, varphi) * one(in, alice_mode(1));
  const double c = std::cos(theta), s = std::sin(theta);
  const Complex ep = std::polar(1.0, phi), ev = std::polar(1.0, varphi);
  expect_coeffs(apply(ifm.circuit, psi),
                {{s_mode(0), c},
                 {s_mode(1), -c * ep + s * ev},
                 {s_mode(2), -s * ev * ep},
                 {d_mode(0), kI * c},
                 {d_mode(1), kI * (c * ep + s * ev)},
                 {d_mode(2), kI * s * ev * ep}},
                0.5);
}

TEST(Interferometer, ConjugateBasisStates) {
  const double r8 = 1.0 / std::sqrt(8.0);
  auto send = [](double phi, Complex second) {
    const auto ifm = unbalanced_interferometer(0, 1, phi);
    const auto& in = ifm.circuit.input();
    const StateVector psi =
        Complex(std::sqrt(0.5)) * one(in, alice_mode(0)) + std::sqrt(0.5) * second * one(in, alice_mode(1));
    return apply(ifm.circuit, psi);
  };
  expect_coeffs(send(0.0, 1.0),
                {{s_mode(0), 1.0}, {s_mode(2), -1.0}, {d_mode(0), kI}, {d_mode(1), 2.0 * kI}, {d_mode(2), kI}},
                r8);
  expect_coeffs(send(0.0, -1.0),
                {{s_mode(0), 1.0}, {s_mode(1), -2.0}, {s_mode(2), 1.0}, {d_mode(0), kI}, {d_mode(2), -kI}},
                r8);
  expect_coeffs(send(kPi / 2, kI),
                {{s_mode(0), 1.0}, {s_mode(2), 1.0}, {d_mode(0), kI}, {d_mode(1), -2.0}, {d_mode(2), -kI}},
                r8);
  expect_coeffs(send(kPi / 2, -kI),
                {{s_mode(0), 1.0}, {s_mode(1), -2.0 * kI}, {s_mode(2), -1.0}, {d_mode(0), kI}, {d_mode(2), kI}},
                r8);
}

// Reversed images of the click states over a@-1..a@2, b@-1..b@2.
TEST(Interferometer, ReversedClickStates) {
  const auto x = unbalanced_interferometer(-1, 2, 0.0);
  const auto y = unbalanced_interferometer(-1, 2, kPi / 2);
  auto back = [](const Interferometer& ifm, const ModeLabel& click) {
    const auto inv = inverse(ifm.circuit);
    return apply(inv, one(inv.input(), click));
  };
  auto expect_phase_equal = [](const StateVector& got,
                               const std::vector<std::pair<ModeLabel, Complex>>& want) {
    StateVector w(got.reg());
    for (const auto& [m, c] : want) w += (0.5 * c) * one(got.reg(), m);
    EXPECT_TRUE(equal_up_to_phase(w, got, 1e-10)) << format_state(got);
  };
  const auto a = alice_mode, b = bob_mode;
  expect_phase_equal(back(x, s_mode(1)), {{a(0), -1.0}, {a(1), 1.0}, {b(0), -kI}, {b(1), -kI}});
  expect_phase_equal(back(x, d_mode(1)), {{a(0), -kI}, {a(1), -kI}, {b(0), 1.0}, {b(1), -1.0}});
  expect_phase_equal(back(x, s_mode(2)), {{a(1), -1.0}, {a(2), 1.0}, {b(1), -kI}, {b(2), -kI}});
  expect_phase_equal(back(x, d_mode(0)), {{a(-1), -kI}, {a(0), -kI}, {b(-1), 1.0}, {b(0), -1.0}});
  expect_phase_equal(back(y, s_mode(1)), {{a(0), kI}, {a(1), 1.0}, {b(0), -1.0}, {b(1), -kI}});
  expect_phase_equal(back(y, d_mode(1)), {{a(0), -1.0}, {a(1), -kI}, {b(0), -kI}, {b(1), -1.0}});

  const auto inv = inverse(x.circuit);
  const auto vac = apply(inv, StateVector::vacuum(inv.input()));
  EXPECT_NEAR(std::abs(vac.amplitude(Occupation(10, 0)) - 1.0), 0.0, 1e-15);
}

}  // namespace
}  // namespace qsop

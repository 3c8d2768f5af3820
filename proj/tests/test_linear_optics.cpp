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
#include <random>

#include "oracles.hpp"
#include "qsop/linear_optics.hpp"

namespace qsop {
namespace {

const double kS2 = std::sqrt(0.5);
const Complex kI(0.0, 1.0);

ModeRegister two(int l) { return oracle::numbered_register(2, l); }

void expect_state(const StateVector& got, const StateVector& want, double tol = 1e-12) {
  ASSERT_TRUE(got.reg().same_modes(want.reg())) << got.reg().str() << " vs " << want.reg().str();
  EXPECT_LT((got - want).norm(), tol) << format_state(got) << "\n vs " << format_state(want);
}

TEST(BeamSplitter, SinglePhotonRule) {
  const auto reg = two(1);
  const auto bs = beam_splitter(reg, reg[0], reg[1]);
  expect_state(apply(bs, StateVector::basis(reg, {1, 0})),
               kS2 * StateVector::basis(reg, {1, 0}) + kI * kS2 * StateVector::basis(reg, {0, 1}));
  expect_state(apply(bs, StateVector::basis(reg, {0, 1})),
               kI * kS2 * StateVector::basis(reg, {1, 0}) + kS2 * StateVector::basis(reg, {0, 1}));
  expect_state(apply(bs, StateVector::vacuum(reg)), StateVector::vacuum(reg));
}

TEST(BeamSplitter, TwoPhotonBunching) {
  const auto reg = two(2);
  const auto bs = beam_splitter(reg, reg[0], reg[1]);
  expect_state(apply(bs, StateVector::basis(reg, {1, 1})),
               kI * kS2 * StateVector::basis(reg, {2, 0}) + kI * kS2 * StateVector::basis(reg, {0, 2}));
}

TEST(BeamSplitter, IdenticalModesThrow) {
  const auto reg = two(1);
  EXPECT_THROW(beam_splitter(reg, reg[0], reg[0]), std::invalid_argument);
}

TEST(PhaseShifter, Photons) {
  const auto reg = two(2);
  const auto zero = phase_shifter(reg, reg[0], 0.0);
  EXPECT_LT((zero.matrix() - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-15);
  const auto p = phase_shifter(reg, reg[0], std::numbers::pi / 2);
  expect_state(apply(p, StateVector::basis(reg, {1, 0})), kI * StateVector::basis(reg, {1, 0}));
  expect_state(apply(p, StateVector::basis(reg, {2, 0})), Complex(-1.0) * StateVector::basis(reg, {2, 0}));
}

TEST(Pockels, RotatesPolarization) {
  const auto reg = two(2);
  const auto pc = pockels_rotation(reg, reg[0], reg[1]);
  expect_state(apply(pc, StateVector::basis(reg, {1, 0})),
               kS2 * StateVector::basis(reg, {1, 0}) + kS2 * StateVector::basis(reg, {0, 1}));
  expect_state(apply(pc, StateVector::vacuum(reg)), StateVector::vacuum(reg));
  // Two photons in the diagonal polarization come back as |20>.
  const StateVector zx2 = 0.5 * StateVector::basis(reg, {2, 0}) +
                          Complex(std::sqrt(2.0) / 2) * StateVector::basis(reg, {1, 1}) +
                          0.5 * StateVector::basis(reg, {0, 2});
  expect_state(apply(pc, zx2), StateVector::basis(reg, {2, 0}));
}

TEST(Delay, MovesLongArmPhoton) {
  const ModeLabel l0{ModeKind::Arm, 0, "long"}, l1{ModeKind::Arm, 1, "long"};
  const ModeLabel s0{ModeKind::Arm, 0, "short"};
  const ModeRegister in({s0, l0}, 1), out({s0, l1}, 1);
  const auto c = delay(in, out, l0, 1);
  const auto got = apply(c, StateVector::basis(in, {0, 1}));
  expect_state(got, StateVector::basis(out, {0, 1}));
  EXPECT_THROW(delay(in, in, l0, 1), std::out_of_range);
  const auto zero = delay(in, in, l0, 0);
  EXPECT_LT((zero.matrix() - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-15);
  const auto back = compose(c, delay(out, in, l1, -1));
  EXPECT_LT((back.matrix() - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-15);
  EXPECT_TRUE(back.output().same_modes(in));
}

TEST(Compose, IdentityAndInverse) {
  const auto reg = oracle::numbered_register(3, 2);
  const auto bs = beam_splitter(reg, reg[0], reg[2]);
  EXPECT_LT((compose(ModeCircuit::identity(reg), bs).matrix() - bs.matrix()).norm(), 1e-15);
  EXPECT_LT((compose(bs, inverse(bs)).matrix() - Eigen::MatrixXcd::Identity(3, 3)).norm(), 1e-12);
  EXPECT_THROW(compose(bs, ModeCircuit::identity(two(1))), std::invalid_argument);
}

TEST(ModeCircuit, RejectsNonUnitary) {
  const auto reg = two(1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
  m(0, 1) = 0.1;
  EXPECT_THROW(ModeCircuit(reg, reg, m), std::invalid_argument);
}

TEST(Apply, SpectatorsComeFirst) {
  const auto reg = oracle::numbered_register(3, 1);
  const ModeRegister sub = reg.subset(std::vector<ModeLabel>{reg[1], reg[2]});
  const auto bs = beam_splitter(sub, sub[0], sub[1]);
  const auto out = apply(bs, StateVector::basis(reg, {0, 1, 0}));
  EXPECT_EQ(out.reg()[0], reg[0]);
  EXPECT_NEAR(std::abs(out.amplitude({0, 1, 0}) - kS2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude({0, 0, 1}) - kI * kS2), 0.0, 1e-15);
}

// Random circuits against the permanent formula, plus conservation laws.
TEST(ApplyProperties, RandomCircuitsAgreeWithPermanentOracle) {
  std::mt19937_64 rng(7);
  int cases = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t m = 1 + static_cast<std::size_t>(rep) % 4;
    const int l = 1 + (rep / 4) % 2;
    const auto reg = oracle::numbered_register(m, l);
    const ModeCircuit c(reg, reg, oracle::random_unitary(m, rng));
    ASSERT_LT(c.unitarity_deviation(), 1e-9);

    const FockBasis basis(reg);
    const Eigen::MatrixXcd dense = oracle::fock_matrix(c);
    const StateVector psi = oracle::random_state(reg, rng);
    const StateVector out = apply(c, psi);
    const Eigen::VectorXcd want = dense * to_dense(psi, basis);
    EXPECT_LT((to_dense(out, basis) - want).norm(), 1e-10);
    EXPECT_NEAR(out.norm(), 1.0, 1e-10);
    EXPECT_LT((apply(inverse(c), out) - psi).norm(), 1e-10);

    // Photon number is conserved term by term.
    for (const auto& occ : basis.states()) {
      const auto col = apply(c, StateVector::basis(reg, occ));
      for (const auto& [o, a] : col.amplitudes()) EXPECT_EQ(total_photons(o), total_photons(occ));
    }
    ++cases;
  }
  EXPECT_EQ(cases, 200);
}

}  // namespace
}  // namespace qsop

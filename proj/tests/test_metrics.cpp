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
#include "qsop/metrics.hpp"
#include "qsop/scenario.hpp"

namespace qsop {
namespace {

constexpr double kPi = std::numbers::pi;

MetricsReport run(const std::string& name) {
  const auto b = build_model(builtin_scenario(name));
  return aggregate(b.model, evaluate_rounds_omp(b.model));
}

// Best two-outcome projective measurement on a qubit, by grid search.
double brute_force_guess(const Eigen::Vector2cd& e0, const Eigen::Vector2cd& e1, double p0) {
  double best = 0.0;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double th = kPi * i / n, ph = 2 * kPi * j / n;
      Eigen::Vector2cd m(std::cos(th / 2), std::polar(std::sin(th / 2), ph));
      const double a = std::norm(m.dot(e0)), b = std::norm(m.dot(e1));
      best = std::max({best, p0 * a + (1 - p0) * (1 - b), p0 * (1 - a) + (1 - p0) * b});
    }
  }
  return best;
}

TEST(Guess, ClosedFormCases) {
  const ModeRegister reg = oracle::numbered_register(2, 1);
  const StateVector a = StateVector::basis(reg, {1, 0}), b = StateVector::basis(reg, {0, 1});
  EXPECT_NEAR(eve_guess_probability(a, b), 1.0, 1e-15);
  EXPECT_NEAR(eve_guess_probability(a, a), 0.5, 1e-15);
  const StateVector c = Complex(std::sqrt(0.5)) * (a + b);
  const double g = eve_guess_probability(a, c);
  EXPECT_NEAR(g, 0.5 * (1 + std::sqrt(0.5)), 1e-15);
  EXPECT_NEAR(g, 0.8536, 1e-4);
  EXPECT_NEAR(brute_force_guess({1, 0}, {std::sqrt(0.5), std::sqrt(0.5)}, 0.5), g, 1e-4);
  EXPECT_THROW(eve_guess_probability(a, b, 1.5), std::invalid_argument);
}

TEST(Guess, HelstromMatchesClosedFormAndSearch) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int k = 0; k < 10; ++k) {
    Eigen::Vector2cd e0(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
    Eigen::Vector2cd e1(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
    e0.normalize();
    e1.normalize();
    const double p0 = u(rng);
    const Eigen::MatrixXcd s0 = p0 * e0 * e0.adjoint(), s1 = (1 - p0) * e1 * e1.adjoint();
    const double closed = 0.5 * (1 + std::sqrt(1 - 4 * p0 * (1 - p0) * std::norm(e0.dot(e1))));
    EXPECT_NEAR(helstrom_success(s0, s1), closed, 1e-12);
    EXPECT_NEAR(brute_force_guess(e0, e1, p0), closed, 2e-4);
  }
  EXPECT_THROW(helstrom_success(Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(2, 2)),
               std::invalid_argument);
}

TEST(Simulate, ProbabilityConservedForEveryBuiltin) {
  for (const auto& name : builtin_scenario_names()) {
    const auto s = builtin_scenario(name);
    if (!s.source) continue;
    const auto b = build_model(s);
    for (const auto& r : evaluate_rounds_serial(b.model)) {
      EXPECT_NEAR(r.total(), 1.0, 1e-9) << name;
      for (std::size_t o = 0; o < kOutcomeCount; ++o) {
        EXPECT_NEAR(r.eve_state[o].trace().real(), r.probability[o], 1e-10) << name;
      }
      double branch_weight = 0.0;
      for (const auto& br : r.branches) {
        branch_weight += br.weight;
        double t = 0;
        for (double p : br.probability) t += p;
        EXPECT_NEAR(t, br.weight, 1e-10) << name << " " << br.name;
      }
      EXPECT_NEAR(branch_weight, 1.0, 1e-9) << name;
    }
  }
}

TEST(Simulate, SerialAndParallelAreBitIdentical) {
  for (const char* name : {"reversed-space", "trojan-pony", "tagging"}) {
    const auto b = build_model(builtin_scenario(name));
    const auto a = evaluate_rounds_serial(b.model);
    const auto c = evaluate_rounds_omp(b.model);
    ASSERT_EQ(a.size(), c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].probability, c[i].probability);
      for (std::size_t o = 0; o < kOutcomeCount; ++o) {
        EXPECT_EQ((a[i].eve_state[o] - c[i].eve_state[o]).norm(), 0.0);
      }
    }
  }
}

TEST(Simulate, IdentityOnIdealBb84) {
  Scenario s = builtin_scenario("weak-coherent-qsop");
  s.source = SourceSpec{};
  s.source->kind = "ideal-bb84";
  s.truncation = 1;
  const auto b = build_model(s);
  for (const auto& r : evaluate_rounds_serial(b.model)) {
    if (r.alice_basis != r.bob_basis) {
      EXPECT_NEAR(r.p(Outcome::Bit0), 0.5, 1e-12);
      continue;
    }
    EXPECT_NEAR(r.p(r.alice_bit == 0 ? Outcome::Bit0 : Outcome::Bit1), 1.0, 1e-12);
  }
  const auto m = aggregate(b.model, evaluate_rounds_serial(b.model));
  EXPECT_NEAR(*m.qber, 0.0, 1e-12);
  EXPECT_NEAR(m.loss_rate, 0.0, 1e-12);
  EXPECT_NEAR(m.sifted_loss_rate, 0.5, 1e-12);
  EXPECT_NEAR(*m.eve_guess, 0.5, 1e-12);
}

TEST(Simulate, NoAttackBaselines) {
  const auto xy = run("xy-bb84-baseline");
  EXPECT_NEAR(*xy.qber, 0.0, 1e-12);
  EXPECT_NEAR(xy.loss_rate, 0.5, 1e-12);

  const auto b = build_model(builtin_scenario("xz-bb84-baseline"));
  for (const auto& r : evaluate_rounds_serial(b.model)) {
    if (r.alice_basis == Basis::Z && r.bob_basis == Basis::Z) {
      EXPECT_NEAR(r.p(Outcome::Loss), 0.75, 1e-12);
    }
    if (r.alice_basis == Basis::X && r.bob_basis == Basis::X) {
      EXPECT_NEAR(r.p(Outcome::Loss), 0.5, 1e-12);
    }
  }
  for (const char* name : {"xz-bb84-baseline", "six-state-qsop", "weak-coherent-qsop"}) {
    EXPECT_NEAR(*run(name).qber, 0.0, 1e-12) << name;
  }
}

TEST(Simulate, PnsTwoPhotonRounds) {
  const auto m = run("pns");
  EXPECT_NEAR(*m.qber, 0.0, 1e-10);
  for (Basis bs : {Basis::Z, Basis::X}) EXPECT_NEAR(m.eve_guess_per_basis.at(bs), 1.0, 1e-10);
}

TEST(Simulate, ReversedSpace) {
  const auto b = build_model(builtin_scenario("reversed-space"));
  const auto rounds = evaluate_rounds_serial(b.model);
  const auto m = aggregate(b.model, rounds);
  EXPECT_NEAR(*m.qber, 0.0, 1e-10);
  EXPECT_NEAR(m.sifted_loss_rate, 0.875, 1e-9);
  // Every (state, setup) pair clicks a quarter of the time.
  EXPECT_NEAR(m.loss_rate, 0.75, 1e-9);
  for (const auto& r : rounds) EXPECT_NEAR(r.p(Outcome::Loss), 0.75, 1e-12);
  EXPECT_NEAR(m.eve_guess_per_basis.at(Basis::X), 1.0, 1e-10);
  // In z both bits click only from the E0 branch.
  EXPECT_NEAR(m.eve_guess_per_basis.at(Basis::Z), 0.5, 1e-10);

  // x rounds: Eve holds (E0 + E1)/sqrt2 for bit 0 and (E0 - E1)/sqrt2 for bit 1.
  const FockBasis eb(b.model.attack.eve_register());
  for (const auto& r : rounds) {
    if (r.alice_basis != Basis::X || r.bob_basis != Basis::X) continue;
    const auto o = static_cast<std::size_t>(r.alice_bit);
    const Eigen::MatrixXcd rho = r.eve_state[o] / r.eve_state[o].trace();
    Eigen::VectorXcd want = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(eb.size()));
    want(static_cast<Eigen::Index>(*eb.index_of({1, 0}))) = std::sqrt(0.5);
    want(static_cast<Eigen::Index>(*eb.index_of({0, 1}))) = (r.alice_bit == 0 ? 1.0 : -1.0) *
                                                             std::sqrt(0.5);
    EXPECT_NEAR((rho - want * want.adjoint()).norm(), 0.0, 1e-10);
  }
}

TEST(Simulate, ZeroErrorAttacks) {
  for (const char* name : {"pns", "tagging", "fake-state", "reversed-space"}) {
    const auto m = run(name);
    ASSERT_TRUE(m.qber.has_value()) << name;
    EXPECT_NEAR(*m.qber, 0.0, 1e-10) << name;
    EXPECT_NEAR(*m.error_rate, 0.0, 1e-10) << name;
  }
  EXPECT_NEAR(run("tagging").eve_guess.value(), 0.75, 1e-10);
}

TEST(Simulate, TrojanPony) {
  const auto m = run("trojan-pony");
  EXPECT_LE(*m.qber, std::pow(2.0, -9));
  EXPECT_NEAR(*m.eve_guess, 1.0, 1e-3);
  const auto c = run("trojan-pony-counter");
  EXPECT_GE(*c.error_rate, 0.24);
}

TEST(Simulate, CountersNeverLowerTheErrorRate) {
  for (const char* name : {"pns", "tagging", "trojan-pony", "weak-coherent-qsop"}) {
    Scenario s = builtin_scenario(name);
    for (auto policy : {DoubleClickPolicy::Loss, DoubleClickPolicy::Error}) {
      s.detector = {DetectorKind::Threshold, policy};
      const auto b1 = build_model(s);
      const auto t = aggregate(b1.model, evaluate_rounds_serial(b1.model));
      s.detector.kind = DetectorKind::Counter;
      const auto b2 = build_model(s);
      const auto c = aggregate(b2.model, evaluate_rounds_serial(b2.model));
      EXPECT_GE(c.error_rate.value_or(1.0) + 1e-12, t.error_rate.value_or(0.0)) << name;
    }
  }
}

TEST(Simulate, FakeStateBranches) {
  for (bool extended : {false, true}) {
    const auto b =
        build_model(builtin_scenario(extended ? "fake-state-extended" : "fake-state"));
    for (const auto& r : evaluate_rounds_serial(b.model)) {
      for (const auto& br : r.branches) {
        const bool eve_matches_bob = (br.name == "measure-z") == (r.bob_basis == Basis::Z);
        if (eve_matches_bob) continue;
        const double lost = br.probability[2] / br.weight;
        const double flagged = br.probability[3] / br.weight;
        if (extended) {
          EXPECT_NEAR(flagged, 1.0, 1e-12);
        } else {
          EXPECT_NEAR(lost, 1.0, 1e-12);
        }
      }
    }
  }
  EXPECT_NEAR(run("fake-state").anomaly_rate, 0.0, 1e-12);
  EXPECT_GT(run("fake-state-extended").anomaly_rate, 0.25);
}

TEST(Simulate, PriorsAreValidated) {
  Scenario s = builtin_scenario("xy-bb84-baseline");
  s.priors.setup = {0.2, 0.8};
  const auto b = build_model(s);
  const auto m = aggregate(b.model, evaluate_rounds_serial(b.model));
  EXPECT_NEAR(m.loss_rate, 0.5, 1e-12);
  s.priors.setup = {0.2, 0.7};
  EXPECT_THROW(build_model(s), ScenarioError);
  EXPECT_THROW(aggregate(b.model, {}), std::invalid_argument);
}

}  // namespace
}  // namespace qsop

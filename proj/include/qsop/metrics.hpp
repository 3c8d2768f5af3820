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
#include <vector>

#include <Eigen/Dense>

#include "qsop/attacks.hpp"
#include "qsop/protocols.hpp"

namespace qsop {

/// Choice probabilities. Empty maps mean uniform.
struct Priors {
  std::map<Basis, double> alice_basis;
  std::vector<double> setup;
  double bit_one = 0.5;
  bool operator==(const Priors&) const = default;
};

/// Everything needed to run rounds: who sends what, what Eve does on the
/// channel register, and how Bob measures.
struct ProtocolModel {
  std::string name;
  AliceSource source;
  ModeRegister channel;
  std::vector<MeasurementSetup> setups;
  Attack attack;
  Priors priors;
};

/// Outcome statistics restricted to one branch of a measure-resend attack.
struct BranchResult {
  std::string name;
  double weight = 0.0;  // probability of the branch
  std::array<double, kOutcomeCount> probability{};  // joint with the branch
};

/// Exact outcome statistics of one (basis, bit, setup) choice.
struct RoundResult {
  Basis alice_basis = Basis::Z;
  int alice_bit = 0;
  std::size_t setup_index = 0;
  Basis bob_basis = Basis::Z;
  std::array<double, kOutcomeCount> probability{};
  /// Eve's unnormalized state per outcome; its trace is the probability.
  std::array<Eigen::MatrixXcd, kOutcomeCount> eve_state;
  double double_click = 0.0;
  double anomaly = 0.0;
  std::vector<BranchResult> branches;

  double p(Outcome o) const { return probability[static_cast<std::size_t>(o)]; }
  double total() const;
};

RoundResult simulate_round(const ProtocolModel& model, Basis basis, int bit,
                           std::size_t setup_index);

struct RoundJob {
  Basis basis;
  int bit;
  std::size_t setup;
};

std::vector<RoundJob> round_jobs(const ProtocolModel& model);

/// Every job of round_jobs(model), in order.
std::vector<RoundResult> evaluate_rounds_serial(const ProtocolModel& model);
std::vector<RoundResult> evaluate_rounds_omp(const ProtocolModel& model);
inline std::vector<RoundResult> simulate(const ProtocolModel& model) {
  return evaluate_rounds_omp(model);
}

struct TableRow {
  Basis alice_basis;
  int alice_bit;
  std::string setup;
  Basis bob_basis;
  std::array<double, kOutcomeCount> probability;
  std::vector<BranchResult> branches;
};

struct MetricsReport {
  /// P(wrong bit | matching bases, Bob got a bit). Empty when that event
  /// has probability zero.
  std::optional<double> qber;
  /// P(wrong bit or error | matching bases, not lost).
  std::optional<double> error_rate;
  /// P(no outcome) over all rounds.
  double loss_rate = 0.0;
  /// 1 - P(matching bases and Bob got a bit).
  double sifted_loss_rate = 0.0;
  double double_click_rate = 0.0;
  double anomaly_rate = 0.0;
  /// Optimal probability that Eve names Alice's bit on sifted conclusive
  /// rounds, bases averaged by their conclusive weight.
  std::optional<double> eve_guess;
  std::map<Basis, double> eve_guess_per_basis;
  std::vector<TableRow> table;
};

MetricsReport aggregate(const ProtocolModel& model, const std::vector<RoundResult>& rounds);

/// Optimal two-hypothesis success for unnormalized states (priors folded in):
/// (tr s0 + tr s1 + ||s0 - s1||_1) / (2 (tr s0 + tr s1)).
double helstrom_success(const Eigen::MatrixXcd& s0, const Eigen::MatrixXcd& s1);

/// 1/2 (1 + sqrt(1 - 4 p0 p1 |<e0|e1>|^2)) for normalized pure states.
double eve_guess_probability(const StateVector& e0, const StateVector& e1, double p0 = 0.5);

}  // namespace qsop

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

#include "qsop/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace qsop {

double RoundResult::total() const {
  double s = 0.0;
  for (double x : probability) s += x;
  return s;
}

namespace {

double basis_prior(const ProtocolModel& m, Basis b) {
  if (m.priors.alice_basis.empty()) return 1.0 / static_cast<double>(m.source.bases.size());
  auto it = m.priors.alice_basis.find(b);
  return it == m.priors.alice_basis.end() ? 0.0 : it->second;
}

double setup_prior(const ProtocolModel& m, std::size_t s) {
  if (m.priors.setup.empty()) return 1.0 / static_cast<double>(m.setups.size());
  return m.priors.setup.at(s);
}

double bit_prior(const ProtocolModel& m, int bit) {
  return bit == 1 ? m.priors.bit_one : 1.0 - m.priors.bit_one;
}

}  // namespace

RoundResult simulate_round(const ProtocolModel& model, Basis basis, int bit,
                           std::size_t setup_index) {
  const MeasurementSetup& setup = model.setups.at(setup_index);
  const ModeRegister& eve = model.attack.eve_register();
  const ModeRegister& in = setup.circuit.input();
  const OutcomeInterpretation interp = setup.interpretation();

  // Eve's modes, then channel modes Bob's circuit ignores, then the circuit
  // inputs; apply() keeps the first two groups as spectators.
  std::vector<ModeLabel> modes = eve.modes();
  for (const auto& m : model.channel.modes()) {
    if (!in.contains(m)) modes.push_back(m);
  }
  const std::size_t ne = eve.size();
  const std::size_t skip = modes.size();
  modes.insert(modes.end(), in.modes().begin(), in.modes().end());

  const FockBasis eve_basis(eve);
  const auto de = static_cast<Eigen::Index>(eve_basis.size());

  RoundResult r;
  r.alice_basis = basis;
  r.alice_bit = bit;
  r.setup_index = setup_index;
  r.bob_basis = setup.basis;
  for (auto& m : r.eve_state) m = Eigen::MatrixXcd::Zero(de, de);
  std::map<std::string, BranchResult> branches;

  for (const Emission& em : model.source.emissions.at({basis, bit})) {
    const StateVector on_channel = embed(em.state.vector(), model.channel.with_max_photons(
        std::max(model.channel.max_photons(), em.state.reg().max_photons())));
    for (const AttackComponent& comp : model.attack.apply(on_channel)) {
      const ModeRegister reg(modes, comp.state.reg().max_photons());
      const StateVector out = apply(setup.circuit, embed(comp.state, reg));
      const double w = em.weight * comp.weight;
      BranchResult& br = branches[comp.branch];
      br.name = comp.branch;
      br.weight += w * comp.state.norm_squared();

      // Group amplitudes by everything Eve does not hold, then add each
      // group's Eve vector as an incoherent term.
      std::map<Occupation, Eigen::VectorXcd> groups;
      std::map<Occupation, ClickPattern> clicks;
      for (const auto& [occ, amp] : out.amplitudes()) {
        const Occupation e(occ.begin(), occ.begin() + static_cast<long>(ne));
        const Occupation rest(occ.begin() + static_cast<long>(ne), occ.end());
        auto it = groups.find(rest);
        if (it == groups.end()) {
          it = groups.emplace(rest, Eigen::VectorXcd::Zero(de)).first;
          clicks.emplace(rest, interp.classify(Occupation(
                                   occ.begin() + static_cast<long>(skip), occ.end())));
        }
        it->second(static_cast<Eigen::Index>(*eve_basis.index_of(e))) += amp;
      }
      for (const auto& [rest, vec] : groups) {
        const ClickPattern& c = clicks.at(rest);
        const double p = w * vec.squaredNorm();
        const auto o = static_cast<std::size_t>(c.outcome);
        r.probability[o] += p;
        br.probability[o] += p;
        r.eve_state[o] += w * (vec * vec.adjoint());
        if (c.detectors_fired >= 2) r.double_click += p;
        if (c.anomaly) r.anomaly += p;
      }
    }
  }
  for (auto& [name, b] : branches) r.branches.push_back(std::move(b));
  return r;
}

std::vector<RoundJob> round_jobs(const ProtocolModel& model) {
  std::vector<RoundJob> jobs;
  for (Basis b : model.source.bases) {
    for (int bit = 0; bit < 2; ++bit) {
      for (std::size_t s = 0; s < model.setups.size(); ++s) jobs.push_back({b, bit, s});
    }
  }
  return jobs;
}

std::vector<RoundResult> evaluate_rounds_serial(const ProtocolModel& model) {
  std::vector<RoundResult> out;
  for (const auto& j : round_jobs(model)) out.push_back(simulate_round(model, j.basis, j.bit, j.setup));
  return out;
}

std::vector<RoundResult> evaluate_rounds_omp(const ProtocolModel& model) {
  const auto jobs = round_jobs(model);
  std::vector<RoundResult> out(jobs.size());
  const auto n = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto& j = jobs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = simulate_round(model, j.basis, j.bit, j.setup);
  }
  return out;
}

double helstrom_success(const Eigen::MatrixXcd& s0, const Eigen::MatrixXcd& s1) {
  const double t = (s0.trace() + s1.trace()).real();
  if (t <= 0.0) throw std::invalid_argument("helstrom: both hypotheses have zero weight");
  const Eigen::MatrixXcd d = s0 - s1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (d + d.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  const double trace_norm = es.eigenvalues().cwiseAbs().sum();
  return (t + trace_norm) / (2.0 * t);
}

double eve_guess_probability(const StateVector& e0, const StateVector& e1, double p0) {
  if (p0 < 0.0 || p0 > 1.0) throw std::invalid_argument("eve guess: prior outside [0, 1]");
  const double ov = std::norm(inner_product(e0, e1));
  return 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * p0 * (1.0 - p0) * ov)));
}

MetricsReport aggregate(const ProtocolModel& model, const std::vector<RoundResult>& rounds) {
  if (rounds.empty()) throw std::invalid_argument("aggregate: no rounds");
  MetricsReport m;
  double loss = 0.0, dbl = 0.0, anomaly = 0.0, total = 0.0;
  double conclusive = 0.0, wrong = 0.0, detected = 0.0, bad = 0.0;
  std::map<Basis, std::array<Eigen::MatrixXcd, 2>> eve;
  std::map<Basis, double> eve_weight;

  for (const auto& r : rounds) {
    const double w = basis_prior(model, r.alice_basis) * bit_prior(model, r.alice_bit) *
                     setup_prior(model, r.setup_index);
    total += w;
    loss += w * r.p(Outcome::Loss);
    dbl += w * r.double_click;
    anomaly += w * r.anomaly;
    m.table.push_back({r.alice_basis, r.alice_bit, model.setups[r.setup_index].name, r.bob_basis,
                       r.probability, r.branches});
    if (r.alice_basis != r.bob_basis) continue;
    const Outcome right = r.alice_bit == 0 ? Outcome::Bit0 : Outcome::Bit1;
    const Outcome flip = r.alice_bit == 0 ? Outcome::Bit1 : Outcome::Bit0;
    conclusive += w * (r.p(right) + r.p(flip));
    wrong += w * r.p(flip);
    detected += w * (r.p(right) + r.p(flip) + r.p(Outcome::Error));
    bad += w * (r.p(flip) + r.p(Outcome::Error));

    auto& slot = eve[r.alice_basis];
    const Eigen::MatrixXcd s = w * (r.eve_state[0] + r.eve_state[1]);
    auto& acc = slot[static_cast<std::size_t>(r.alice_bit)];
    acc = acc.size() == 0 ? s : Eigen::MatrixXcd(acc + s);
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("aggregate: round priors sum to " + std::to_string(total));
  }
  m.loss_rate = loss;
  m.double_click_rate = dbl;
  m.anomaly_rate = anomaly;
  m.sifted_loss_rate = 1.0 - conclusive;
  if (conclusive > 0.0) m.qber = wrong / conclusive;
  if (detected > 0.0) m.error_rate = bad / detected;

  double guess = 0.0, weight = 0.0;
  for (auto& [b, s] : eve) {
    const auto d = std::max(s[0].rows(), s[1].rows());
    for (auto& x : s) {
      if (x.size() == 0) x = Eigen::MatrixXcd::Zero(d, d);
    }
    const double t = (s[0].trace() + s[1].trace()).real();
    if (t <= 1e-15) continue;
    const double g = helstrom_success(s[0], s[1]);
    m.eve_guess_per_basis[b] = g;
    guess += g * t;
    weight += t;
  }
  if (weight > 0.0) m.eve_guess = guess / weight;
  return m;
}

}  // namespace qsop

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

#include "qsop/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "qsop/kernels.hpp"

namespace qsop {

namespace {

const double kInvSqrt2 = std::sqrt(0.5);
const Complex kI(0.0, 1.0);

StateVector single(const ModeRegister& reg, const ModeLabel& m, int photons = 1) {
  Occupation o(reg.size(), 0);
  o[reg.require(m)] = photons;
  return StateVector::basis(reg, o);
}

}  // namespace

std::string to_string(Basis b) {
  switch (b) {
    case Basis::Z: return "z";
    case Basis::X: return "x";
    case Basis::Y: return "y";
  }
  return "?";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Bit0: return "bit0";
    case Outcome::Bit1: return "bit1";
    case Outcome::Loss: return "loss";
    case Outcome::Error: return "error";
  }
  return "?";
}

Basis parse_basis(std::string_view text) {
  if (text == "z") return Basis::Z;
  if (text == "x") return Basis::X;
  if (text == "y") return Basis::Y;
  throw std::invalid_argument("unknown basis '" + std::string(text) + "'");
}

std::string to_string(DetectorKind k) { return k == DetectorKind::Threshold ? "threshold" : "counter"; }
std::string to_string(DoubleClickPolicy p) { return p == DoubleClickPolicy::Loss ? "loss" : "error"; }

DetectorKind parse_detector_kind(std::string_view text) {
  if (text == "threshold") return DetectorKind::Threshold;
  if (text == "counter") return DetectorKind::Counter;
  throw std::invalid_argument("unknown detector kind '" + std::string(text) + "'");
}

DoubleClickPolicy parse_double_click_policy(std::string_view text) {
  if (text == "loss") return DoubleClickPolicy::Loss;
  if (text == "error") return DoubleClickPolicy::Error;
  throw std::invalid_argument("unknown double-click policy '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Detectors

OutcomeInterpretation::OutcomeInterpretation(const ModeRegister& output,
                                             std::vector<Detector> detectors, DetectorModel model)
    : detectors_(std::move(detectors)), model_(model) {
  std::set<ModeLabel> seen;
  for (const auto& d : detectors_) {
    if (d.report == Outcome::Loss) {
      throw std::invalid_argument("detector " + d.name + " cannot report a loss");
    }
    std::vector<std::size_t> pos;
    for (const auto& m : d.modes) {
      if (m.kind == ModeKind::EveInternal) {
        throw std::invalid_argument("detector " + d.name + " watches an eve-internal mode");
      }
      if (!seen.insert(m).second) {
        throw std::invalid_argument("mode " + m.str() + " watched by two detectors");
      }
      pos.push_back(output.require(m));
    }
    positions_.push_back(std::move(pos));
  }
}

ClickPattern OutcomeInterpretation::classify(const Occupation& occ) const {
  ClickPattern p;
  int total = 0;
  std::size_t fired = 0;
  for (std::size_t d = 0; d < detectors_.size(); ++d) {
    int count = 0;
    for (auto i : positions_[d]) count += occ[i];
    if (count > 0) {
      ++p.detectors_fired;
      fired = d;
      total += count;
      p.anomaly = p.anomaly || detectors_[d].report == Outcome::Error;
    }
  }
  if (p.detectors_fired == 0) {
    p.outcome = Outcome::Loss;
  } else if (model_.kind == DetectorKind::Counter) {
    p.outcome = (p.detectors_fired == 1 && total == 1) ? detectors_[fired].report : Outcome::Error;
  } else if (p.detectors_fired == 1) {
    p.outcome = detectors_[fired].report;
  } else {
    p.outcome = model_.double_click == DoubleClickPolicy::Loss ? Outcome::Loss : Outcome::Error;
  }
  return p;
}

std::vector<ModeLabel> OutcomeInterpretation::monitored_modes() const {
  std::vector<ModeLabel> out;
  for (const auto& d : detectors_) out.insert(out.end(), d.modes.begin(), d.modes.end());
  return out;
}

OutcomeInterpretation MeasurementSetup::interpretation() const {
  return OutcomeInterpretation(circuit.output(), detectors, model);
}

BobSetup MeasurementSetup::bob_setup() const {
  const auto monitored = interpretation().monitored_modes();
  return BobSetup{name, circuit,
                  measured_basis(circuit.output(), monitored, circuit.output().max_photons()),
                  bob_ancillas};
}

double povm_completeness_deviation(const MeasurementSetup& setup) {
  const auto interp = setup.interpretation();
  const Eigen::MatrixXcd f = fock_matrix(setup.circuit);
  const FockBasis out(setup.circuit.output().with_max_photons(setup.circuit.input().max_photons()));
  const auto n = f.cols();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t o = 0; o < kOutcomeCount; ++o) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(f.rows());
    for (std::size_t r = 0; r < out.size(); ++r) {
      if (static_cast<std::size_t>(interp.classify(out[r]).outcome) == o) {
        diag(static_cast<Eigen::Index>(r)) = 1.0;
      }
    }
    total += f.adjoint() * diag.asDiagonal() * f;
  }
  return (total - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

std::array<double, kOutcomeCount> outcome_distribution(const MeasurementSetup& setup,
                                                       const StateVector& state) {
  const ModeRegister& in = setup.circuit.input();
  std::vector<ModeLabel> modes;
  for (const auto& m : state.reg().modes()) {
    if (!in.contains(m)) modes.push_back(m);
  }
  const std::size_t extra = modes.size();
  modes.insert(modes.end(), in.modes().begin(), in.modes().end());
  const ModeRegister reg(modes, state.reg().max_photons());
  const StateVector out = apply(setup.circuit, embed(state, reg));
  const auto interp = OutcomeInterpretation(
      setup.circuit.output(), setup.detectors, setup.model);
  std::array<double, kOutcomeCount> p{};
  for (const auto& [occ, amp] : out.amplitudes()) {
    const Occupation tail(occ.begin() + static_cast<long>(extra), occ.end());
    p[static_cast<std::size_t>(interp.classify(tail).outcome)] += std::norm(amp);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Sources

std::vector<PureState> AliceSource::components() const {
  std::vector<PureState> out;
  for (const auto& [prep, list] : emissions) {
    for (const auto& e : list) out.push_back(e.state);
  }
  return out;
}

std::map<Basis, double> AliceSource::bit_overlaps() const {
  std::map<Basis, double> out;
  for (Basis b : bases) {
    out[b] = std::abs(inner_product(states.at({b, 0}), states.at({b, 1})));
  }
  return out;
}

ModeLabel pol_h(int t) { return {ModeKind::Polarization, t, "H"}; }
ModeLabel pol_v(int t) { return {ModeKind::Polarization, t, "V"}; }
ModeLabel tag_z() { return {ModeKind::Tag, 0, "z"}; }
ModeLabel tag_x() { return {ModeKind::Tag, 0, "x"}; }

ModeRegister polarization_register(int max_photons) {
  return ModeRegister({pol_h(), pol_v()}, max_photons);
}

namespace {

AliceSource pure_source(std::string name, ModeRegister reg,
                        std::map<Preparation, PureState> states) {
  AliceSource s{std::move(name), std::move(reg), {}, std::move(states), {}};
  for (const auto& [prep, st] : s.states) {
    if (std::find(s.bases.begin(), s.bases.end(), prep.first) == s.bases.end()) {
      s.bases.push_back(prep.first);
    }
    s.emissions[prep] = {Emission{1.0, st}};
  }
  return s;
}

std::map<Preparation, PureState> qubit_states(const ModeRegister& reg, const ModeLabel& m0,
                                              const ModeLabel& m1,
                                              const std::vector<Basis>& bases) {
  const StateVector e0 = single(reg, m0), e1 = single(reg, m1);
  std::map<Preparation, PureState> out;
  for (Basis b : bases) {
    switch (b) {
      case Basis::Z:
        out.emplace(Preparation{b, 0}, PureState(e0));
        out.emplace(Preparation{b, 1}, PureState(e1));
        break;
      case Basis::X:
        out.emplace(Preparation{b, 0}, PureState(kInvSqrt2 * e0 + kInvSqrt2 * e1));
        out.emplace(Preparation{b, 1}, PureState(kInvSqrt2 * e0 - kInvSqrt2 * e1));
        break;
      case Basis::Y:
        out.emplace(Preparation{b, 0}, PureState(kInvSqrt2 * e0 + kI * kInvSqrt2 * e1));
        out.emplace(Preparation{b, 1}, PureState(kInvSqrt2 * e0 - kI * kInvSqrt2 * e1));
        break;
    }
  }
  return out;
}

}  // namespace

AliceSource source_ideal_bb84(int max_photons) {
  const auto reg = polarization_register(max_photons);
  return pure_source("ideal-bb84", reg, qubit_states(reg, pol_h(), pol_v(), {Basis::Z, Basis::X}));
}

AliceSource source_vacuum_qubit(double vacuum_weight, int max_photons) {
  if (vacuum_weight < 0.0 || vacuum_weight > 1.0) {
    throw std::invalid_argument("vacuum weight outside [0, 1]");
  }
  AliceSource s = source_ideal_bb84(max_photons);
  s.name = "vacuum-qubit";
  const PureState vac = PureState::vacuum(s.reg);
  for (auto& [prep, list] : s.emissions) {
    list = {Emission{1.0 - vacuum_weight, s.states.at(prep)}, Emission{vacuum_weight, vac}};
  }
  return s;
}

std::vector<Complex> coherent_amplitudes(Complex alpha, int max_photons) {
  std::vector<Complex> c;
  const double pre = std::exp(-std::norm(alpha) / 2.0);
  Complex pow = 1.0;
  double fact = 1.0;
  for (int n = 0; n <= max_photons; ++n) {
    if (n > 0) {
      pow *= alpha;
      fact *= n;
    }
    c.push_back(pre * pow / std::sqrt(fact));
  }
  return c;
}

AliceSource source_weak_coherent(Complex alpha, int max_photons, std::optional<int> photon_number) {
  if (std::abs(alpha) >= 1.0) throw std::invalid_argument("weak coherent source needs |alpha| < 1");
  if (max_photons < 1) throw std::invalid_argument("truncation too small for a pulse");
  if (photon_number && (*photon_number < 0 || *photon_number > max_photons)) {
    throw std::invalid_argument("photon number exceeds truncation");
  }
  const auto reg = polarization_register(max_photons);
  const ModeCircuit pockels = pockels_rotation(reg, pol_h(), pol_v());
  const auto c = coherent_amplitudes(alpha, max_photons);

  // n photons in the polarization that encodes (basis, bit).
  auto fock = [&](Preparation p, int n) {
    const ModeLabel& m = p.second == 0 ? pol_h() : pol_v();
    StateVector v = single(reg, m, n);
    return p.first == Basis::X ? apply(pockels, v) : v;
  };

  AliceSource s;
  s.name = "weak-coherent";
  s.reg = reg;
  s.bases = {Basis::Z, Basis::X};
  double total = 0.0;
  for (const auto& cn : c) total += std::norm(cn);
  for (Basis b : s.bases) {
    for (int bit = 0; bit < 2; ++bit) {
      const Preparation p{b, bit};
      StateVector pulse(reg);
      std::vector<Emission> mix;
      for (int n = 0; n <= max_photons; ++n) {
        const StateVector f = fock(p, n);
        pulse += c[static_cast<std::size_t>(n)] * f;
        if (!photon_number || *photon_number == n) {
          const double w = photon_number ? 1.0 : std::norm(c[static_cast<std::size_t>(n)]) / total;
          mix.push_back(Emission{w, PureState(f.pruned())});
        }
      }
      s.states.emplace(p, photon_number ? mix.front().state : PureState::normalize(pulse));
      s.emissions.emplace(p, std::move(mix));
    }
  }
  return s;
}

AliceSource source_tagging(double tag_probability) {
  if (tag_probability < 0.0 || tag_probability > 1.0) {
    throw std::invalid_argument("tag probability outside [0, 1]");
  }
  const ModeRegister qubit = polarization_register(1);
  const ModeRegister tags({tag_z(), tag_x()}, 1);
  const ModeRegister reg = concat(qubit, tags);
  const auto q = qubit_states(qubit, pol_h(), pol_v(), {Basis::Z, Basis::X});
  AliceSource s;
  s.name = "tagging";
  s.reg = reg;
  s.bases = {Basis::Z, Basis::X};
  for (const auto& [prep, st] : q) {
    const ModeLabel& t = prep.first == Basis::Z ? tag_z() : tag_x();
    const PureState tagged = tensor(st, PureState::basis(tags, tags.require(t) == 0
                                                                   ? Occupation{1, 0}
                                                                   : Occupation{0, 1}));
    const PureState plain = tensor(st, PureState::vacuum(tags));
    s.states.emplace(prep, tagged);
    s.emissions[prep] = {Emission{tag_probability, tagged}, Emission{1.0 - tag_probability, plain}};
  }
  return s;
}

AliceSource source_interferometric(const std::vector<Basis>& bases) {
  const ModeRegister reg({alice_mode(0), alice_mode(1)}, 1);
  return pure_source("interferometric", reg, qubit_states(reg, alice_mode(0), alice_mode(1), bases));
}

// ---------------------------------------------------------------------------
// Setups

std::string to_string(InterferometricVariant v) {
  switch (v) {
    case InterferometricVariant::XY: return "xy-bb84";
    case InterferometricVariant::XZ: return "xz-bb84";
    case InterferometricVariant::XYZ: return "xyz-six-state";
  }
  return "?";
}

InterferometricVariant parse_variant(std::string_view text) {
  if (text == "xy-bb84") return InterferometricVariant::XY;
  if (text == "xz-bb84") return InterferometricVariant::XZ;
  if (text == "xyz-six-state") return InterferometricVariant::XYZ;
  throw std::invalid_argument("unknown interferometric variant '" + std::string(text) + "'");
}

MeasurementSetup setup_polarization(Basis basis, DetectorModel model, int max_photons) {
  const auto reg = polarization_register(max_photons);
  std::vector<Detector> det{{"H", {pol_h()}, Outcome::Bit0}, {"V", {pol_v()}, Outcome::Bit1}};
  switch (basis) {
    case Basis::Z:
      return {"pol-z", basis, ModeCircuit::identity(reg), det, model, {}};
    case Basis::X:
      return {"pol-x", basis, pockels_rotation(reg, pol_h(), pol_v()), det, model, {}};
    case Basis::Y:
      break;
  }
  throw std::invalid_argument("polarization setup supports z and x only");
}

namespace {

std::pair<int, int> variant_bins(InterferometricVariant v) {
  return v == InterferometricVariant::XY ? std::pair{0, 1} : std::pair{-1, 2};
}

bool variant_has(InterferometricVariant v, Basis b) {
  switch (v) {
    case InterferometricVariant::XY: return b == Basis::X || b == Basis::Y;
    case InterferometricVariant::XZ: return b == Basis::X || b == Basis::Z;
    case InterferometricVariant::XYZ: return true;
  }
  return false;
}

}  // namespace

MeasurementSetup setup_interferometric(InterferometricVariant variant, Basis basis,
                                       DetectorModel model) {
  if (!variant_has(variant, basis)) {
    throw std::invalid_argument("variant " + to_string(variant) + " has no " + to_string(basis) +
                                " setup");
  }
  const auto [f, l] = variant_bins(variant);
  const double phi = basis == Basis::Y ? std::numbers::pi / 2 : 0.0;
  Interferometer ifm = unbalanced_interferometer(f, l, phi);
  std::vector<Detector> det;
  if (basis == Basis::Z) {
    det = {{"d@0", {d_mode(0)}, Outcome::Bit0}, {"s@2", {s_mode(2)}, Outcome::Bit1}};
  } else {
    det = {{"d@1", {d_mode(1)}, Outcome::Bit0}, {"s@1", {s_mode(1)}, Outcome::Bit1}};
  }
  return {"interf-" + to_string(basis), basis, std::move(ifm.circuit), std::move(det), model,
          std::move(ifm.bob_ancillas)};
}

ModeRegister interferometric_channel(InterferometricVariant variant) {
  const auto [f, l] = variant_bins(variant);
  std::vector<ModeLabel> modes;
  for (int t = f; t <= l; ++t) modes.push_back(alice_mode(t));
  return ModeRegister(modes, 1);
}

ModeRegister fake_state_register() {
  return ModeRegister({pol_v(-1), pol_h(-1), pol_v(0), pol_h(0), pol_v(1), pol_h(1)}, 1);
}

std::vector<MeasurementSetup> setup_fake_state_scenario(bool extended) {
  const auto reg = fake_state_register();
  const DetectorModel model{};

  std::vector<Detector> z{{"H@0..1", {pol_h(0), pol_h(1)}, Outcome::Bit0},
                          {"V@0..1", {pol_v(0), pol_v(1)}, Outcome::Bit1}};
  std::vector<Detector> x{{"H@-1..0", {pol_h(-1), pol_h(0)}, Outcome::Bit0},
                          {"V@-1..0", {pol_v(-1), pol_v(0)}, Outcome::Bit1}};
  if (extended) {
    z.push_back({"early", {pol_h(-1), pol_v(-1)}, Outcome::Error});
    x.push_back({"late", {pol_h(1), pol_v(1)}, Outcome::Error});
  }
  ModeCircuit rot = ModeCircuit::identity(reg);
  for (int t = -1; t <= 1; ++t) rot = compose(rot, pockels_rotation(reg, pol_h(t), pol_v(t)));
  const std::string suffix = extended ? "-extended" : "";
  return {{"fake-z" + suffix, Basis::Z, ModeCircuit::identity(reg), std::move(z), model, {}},
          {"fake-x" + suffix, Basis::X, std::move(rot), std::move(x), model, {}}};
}

AliceSource source_fake_state() {
  const auto reg = fake_state_register();
  const StateVector h = single(reg, pol_h(0)), v = single(reg, pol_v(0));
  std::map<Preparation, PureState> st;
  st.emplace(Preparation{Basis::Z, 0}, PureState(h));
  st.emplace(Preparation{Basis::Z, 1}, PureState(v));
  st.emplace(Preparation{Basis::X, 0}, PureState(kInvSqrt2 * h + kInvSqrt2 * v));
  st.emplace(Preparation{Basis::X, 1}, PureState(kInvSqrt2 * h - kInvSqrt2 * v));
  return pure_source("fake-state", reg, std::move(st));
}

}  // namespace qsop

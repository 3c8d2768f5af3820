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

#include "qsop/linear_optics.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qsop {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

Eigen::MatrixXcd identity_matrix(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return Eigen::MatrixXcd::Identity(m, m);
}

Eigen::Index idx(const ModeRegister& reg, const ModeLabel& label) {
  return static_cast<Eigen::Index>(reg.require(label));
}

}  // namespace

ModeCircuit::ModeCircuit(ModeRegister input, ModeRegister output, Eigen::MatrixXcd mode_matrix)
    : input_(std::move(input)), output_(std::move(output)), u_(std::move(mode_matrix)) {
  if (input_.size() != output_.size()) {
    throw std::invalid_argument("circuit registers differ in mode count");
  }
  const auto n = static_cast<Eigen::Index>(input_.size());
  if (u_.rows() != n || u_.cols() != n) {
    throw std::invalid_argument("mode matrix shape does not match registers");
  }
  const double dev = unitarity_deviation();
  if (dev > kUnitarityTolerance) {
    throw std::invalid_argument("mode matrix is not unitary (deviation " + std::to_string(dev) +
                                ")");
  }
}

ModeCircuit ModeCircuit::identity(const ModeRegister& reg) {
  return ModeCircuit(reg, reg, identity_matrix(reg.size()));
}

double ModeCircuit::unitarity_deviation() const {
  if (u_.size() == 0) return 0.0;
  const Eigen::MatrixXcd d = u_.adjoint() * u_ - identity_matrix(input_.size());
  return d.cwiseAbs().maxCoeff();
}

ModeCircuit beam_splitter(const ModeRegister& reg, const ModeLabel& mode1,
                          const ModeLabel& mode2) {
  if (mode1 == mode2) throw std::invalid_argument("beam splitter needs two distinct modes");
  const auto i = idx(reg, mode1), j = idx(reg, mode2);
  Eigen::MatrixXcd u = identity_matrix(reg.size());
  const Complex t(kInvSqrt2, 0.0), r(0.0, kInvSqrt2);
  u(i, i) = t;
  u(j, i) = r;
  u(i, j) = r;
  u(j, j) = t;
  return ModeCircuit(reg, reg, std::move(u));
}

ModeCircuit phase_shifter(const ModeRegister& reg, const ModeLabel& mode, double phi) {
  Eigen::MatrixXcd u = identity_matrix(reg.size());
  const auto i = idx(reg, mode);
  u(i, i) = std::polar(1.0, phi);
  return ModeCircuit(reg, reg, std::move(u));
}

ModeCircuit pockels_rotation(const ModeRegister& reg, const ModeLabel& mode_h,
                             const ModeLabel& mode_v) {
  if (mode_h == mode_v) throw std::invalid_argument("polarization rotation needs two modes");
  const auto h = idx(reg, mode_h), v = idx(reg, mode_v);
  Eigen::MatrixXcd u = identity_matrix(reg.size());
  u(h, h) = kInvSqrt2;
  u(v, h) = kInvSqrt2;
  u(h, v) = kInvSqrt2;
  u(v, v) = -kInvSqrt2;
  return ModeCircuit(reg, reg, std::move(u));
}

ModeCircuit relabel(const ModeRegister& input, const ModeRegister& output,
                    const std::map<ModeLabel, ModeLabel>& renames) {
  if (input.size() != output.size()) {
    throw std::invalid_argument("relabel: registers differ in mode count");
  }
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(input.size()),
                                              static_cast<Eigen::Index>(input.size()));
  std::set<std::size_t> hit;
  for (std::size_t i = 0; i < input.size(); ++i) {
    auto it = renames.find(input[i]);
    const ModeLabel& target = it == renames.end() ? input[i] : it->second;
    auto j = output.index_of(target);
    if (!j) throw std::out_of_range("relabel target " + target.str() + " absent from output");
    if (!hit.insert(*j).second) {
      throw std::invalid_argument("relabel is not a bijection at " + target.str());
    }
    u(static_cast<Eigen::Index>(*j), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return ModeCircuit(input, output, std::move(u));
}

ModeCircuit delay(const ModeRegister& input, const ModeRegister& output, const ModeLabel& mode,
                  int bins) {
  input.require(mode);
  const ModeLabel target = mode.shifted(bins);
  if (!output.contains(target)) {
    throw std::out_of_range("delayed mode " + target.str() + " absent from output register");
  }
  std::map<ModeLabel, ModeLabel> renames;
  if (bins != 0) renames.emplace(mode, target);
  return relabel(input, output, renames);
}

ModeCircuit delay(const ModeRegister& input, std::span<const ModeLabel> modes, int bins) {
  std::map<ModeLabel, ModeLabel> renames;
  for (const auto& m : modes) {
    input.require(m);
    renames.emplace(m, m.shifted(bins));
  }
  std::vector<ModeLabel> out_modes;
  for (const auto& m : input.modes()) {
    auto it = renames.find(m);
    out_modes.push_back(it == renames.end() ? m : it->second);
  }
  ModeRegister output(std::move(out_modes), input.max_photons());
  return relabel(input, output, renames);
}

ModeCircuit compose(const ModeCircuit& first, const ModeCircuit& second) {
  if (!first.output().same_modes(second.input())) {
    throw std::invalid_argument("compose: " + first.output().str() + " does not feed " +
                                second.input().str());
  }
  return ModeCircuit(first.input(), second.output(), second.matrix() * first.matrix());
}

ModeCircuit inverse(const ModeCircuit& circuit) {
  return ModeCircuit(circuit.output(), circuit.input(), circuit.matrix().adjoint());
}

StateVector apply(const ModeCircuit& circuit, const StateVector& state) {
  const ModeRegister& sreg = state.reg();
  const ModeRegister& in = circuit.input();
  const ModeRegister& out = circuit.output();
  const Eigen::MatrixXcd& u = circuit.matrix();

  std::vector<std::size_t> in_pos(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    auto p = sreg.index_of(in[i]);
    if (!p) throw std::invalid_argument("apply: state lacks circuit input mode " + in[i].str());
    in_pos[i] = *p;
  }
  std::vector<std::size_t> spectators;
  std::vector<ModeLabel> out_modes;
  for (std::size_t k = 0; k < sreg.size(); ++k) {
    if (in.contains(sreg[k])) continue;
    if (out.contains(sreg[k])) {
      throw std::invalid_argument("apply: spectator mode " + sreg[k].str() +
                                  " collides with circuit output");
    }
    spectators.push_back(k);
    out_modes.push_back(sreg[k]);
  }
  out_modes.insert(out_modes.end(), out.modes().begin(), out.modes().end());
  ModeRegister out_reg(std::move(out_modes), sreg.max_photons());

  const std::size_t n = in.size();
  const std::size_t ns = spectators.size();
  StateVector result(out_reg);
  // Non-zero entries of each column, so sparse circuits stay cheap.
  std::vector<std::vector<std::pair<std::size_t, Complex>>> columns(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex c = u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      if (std::abs(c) > 0.0) columns[i].emplace_back(j, c);
    }
  }

  for (const auto& [occ, amp] : state.amplitudes()) {
    // Polynomial in output creation operators, keyed by exponents.
    std::map<Occupation, Complex> poly{{Occupation(n, 0), amp}};
    double in_norm = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int photons = occ[in_pos[i]];
      in_norm *= factorial(photons);
      for (int k = 0; k < photons; ++k) {
        std::map<Occupation, Complex> next;
        for (const auto& [mono, c] : poly) {
          for (const auto& [j, uji] : columns[i]) {
            Occupation m = mono;
            ++m[j];
            next[m] += c * uji;
          }
        }
        poly = std::move(next);
      }
    }
    const double in_scale = 1.0 / std::sqrt(in_norm);
    for (const auto& [mono, c] : poly) {
      double out_norm = 1.0;
      for (int k : mono) out_norm *= factorial(k);
      Occupation o(ns + n);
      for (std::size_t s = 0; s < ns; ++s) o[s] = occ[spectators[s]];
      for (std::size_t j = 0; j < n; ++j) o[ns + j] = mono[j];
      if (total_photons(o) > out_reg.max_photons()) {
        throw std::logic_error("apply: passive circuit exceeded the photon cutoff");
      }
      result.add(o, c * in_scale * std::sqrt(out_norm));
    }
  }
  return result.pruned();
}

PureState apply(const ModeCircuit& circuit, const PureState& state) {
  return PureState(apply(circuit, state.vector()));
}

}  // namespace qsop

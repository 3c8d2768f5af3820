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

#include "qsop/subspace.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace qsop {

Subspace::Subspace(ModeRegister reg, std::vector<PureState> basis)
    : reg_(std::move(reg)), basis_(std::move(basis)) {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (!basis_[i].reg().same_modes(reg_)) {
      throw std::invalid_argument("subspace basis vector on wrong register");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(inner_product(basis_[j], basis_[i])) > kOrthTolerance) {
        throw std::invalid_argument("subspace basis is not orthogonal");
      }
    }
  }
}

StateVector Subspace::project(const StateVector& v) const {
  StateVector out(v.reg());
  for (const auto& b : basis_) out += inner_product(b, v) * b.vector();
  return out;
}

double Subspace::residual(const StateVector& v) const { return (v - project(v)).norm(); }

Subspace Subspace::embedded(const ModeRegister& target) const {
  std::vector<PureState> out;
  out.reserve(basis_.size());
  for (const auto& b : basis_) out.push_back(embed(b, target));
  return Subspace(target, std::move(out));
}

Subspace orthonormalize(const ModeRegister& reg, std::span<const StateVector> states,
                        double tol) {
  std::vector<PureState> basis;
  for (const auto& s : states) {
    if (!s.reg().same_modes(reg)) {
      throw std::invalid_argument("orthonormalize: register mismatch " + s.reg().str() +
                                  " vs " + reg.str());
    }
    const double n = s.norm();
    if (n < kPruneTolerance) continue;
    StateVector r = Complex(1.0 / n) * s;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) r -= inner_product(b, r) * b.vector();
    }
    const double rn = r.norm();
    if (rn < tol) continue;
    // The basis is stored on `reg` so the cutoff is the caller's.
    StateVector on_reg(reg, (Complex(1.0 / rn) * r).pruned().amplitudes());
    basis.emplace_back(std::move(on_reg));
  }
  return Subspace(reg, std::move(basis));
}

Subspace orthonormalize(const ModeRegister& reg, std::span<const PureState> states,
                        double tol) {
  std::vector<StateVector> vs;
  vs.reserve(states.size());
  for (const auto& s : states) vs.push_back(s.vector());
  return orthonormalize(reg, vs, tol);
}

Subspace traced_support(const StateVector& state, std::span<const ModeLabel> kept,
                        double tol) {
  if (kept.empty()) throw std::invalid_argument("traced_support: empty kept set");
  const ModeRegister& reg = state.reg();
  const ModeRegister kept_reg = reg.subset(kept);
  std::vector<std::size_t> kept_pos, rest_pos;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    (kept_reg.contains(reg[i]) ? kept_pos : rest_pos).push_back(i);
  }

  std::map<Occupation, StateVector> blocks;
  for (const auto& [occ, amp] : state.amplitudes()) {
    Occupation k(kept_pos.size()), r(rest_pos.size());
    for (std::size_t i = 0; i < kept_pos.size(); ++i) k[i] = occ[kept_pos[i]];
    for (std::size_t i = 0; i < rest_pos.size(); ++i) r[i] = occ[rest_pos[i]];
    auto it = blocks.try_emplace(r, kept_reg).first;
    it->second.add(k, amp);
  }
  std::vector<StateVector> parts;
  parts.reserve(blocks.size());
  for (auto& [r, v] : blocks) parts.push_back(std::move(v));
  return orthonormalize(kept_reg, parts, tol);
}

bool same_span(const Subspace& a, const Subspace& b, double tol) {
  if (a.dim() != b.dim()) return false;
  for (const auto& v : a.basis()) {
    if (!b.contains(v, tol)) return false;
  }
  for (const auto& v : b.basis()) {
    if (!a.contains(v, tol)) return false;
  }
  return true;
}

Subspace span_union(const ModeRegister& reg, std::span<const Subspace> parts, double tol) {
  std::vector<StateVector> all;
  for (const auto& p : parts) {
    for (const auto& b : p.basis()) all.push_back(b.vector());
  }
  return orthonormalize(reg, all, tol);
}

}  // namespace qsop

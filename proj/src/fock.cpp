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

#include "qsop/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qsop {

std::string to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::TimeBin: return "time-bin";
    case ModeKind::Polarization: return "polarization";
    case ModeKind::Arm: return "arm";
    case ModeKind::Tag: return "tag";
    case ModeKind::EveInternal: return "eve-internal";
  }
  return "?";
}

ModeKind parse_mode_kind(std::string_view text) {
  if (text == "time-bin") return ModeKind::TimeBin;
  if (text == "polarization") return ModeKind::Polarization;
  if (text == "arm") return ModeKind::Arm;
  if (text == "tag") return ModeKind::Tag;
  if (text == "eve-internal") return ModeKind::EveInternal;
  throw std::invalid_argument("unknown mode kind '" + std::string(text) + "'");
}

ModeLabel ModeLabel::shifted(int bins) const {
  ModeLabel out = *this;
  out.time_index += bins;
  return out;
}

std::string ModeLabel::str() const {
  return channel + "@" + std::to_string(time_index);
}

int total_photons(const Occupation& occ) {
  return std::accumulate(occ.begin(), occ.end(), 0);
}

// ---------------------------------------------------------------------------
// ModeRegister

ModeRegister::ModeRegister(std::vector<ModeLabel> modes, int max_photons)
    : modes_(std::move(modes)), max_photons_(max_photons) {
  if (max_photons_ < 0) throw std::invalid_argument("negative photon cutoff");
  std::set<ModeLabel> seen;
  for (const auto& m : modes_) {
    if (!seen.insert(m).second) {
      throw std::invalid_argument("duplicate mode label " + m.str());
    }
  }
}

std::optional<std::size_t> ModeRegister::index_of(const ModeLabel& label) const {
  auto it = std::find(modes_.begin(), modes_.end(), label);
  if (it == modes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - modes_.begin());
}

std::size_t ModeRegister::require(const ModeLabel& label) const {
  auto idx = index_of(label);
  if (!idx) throw std::out_of_range("mode " + label.str() + " not in register " + str());
  return *idx;
}

ModeRegister ModeRegister::with_max_photons(int max_photons) const {
  return ModeRegister(modes_, max_photons);
}

ModeRegister ModeRegister::subset(std::span<const ModeLabel> labels) const {
  for (const auto& l : labels) require(l);
  std::vector<ModeLabel> kept;
  for (const auto& m : modes_) {
    if (std::find(labels.begin(), labels.end(), m) != labels.end()) kept.push_back(m);
  }
  return ModeRegister(std::move(kept), max_photons_);
}

ModeRegister ModeRegister::without(std::span<const ModeLabel> labels) const {
  std::vector<ModeLabel> kept;
  for (const auto& m : modes_) {
    if (std::find(labels.begin(), labels.end(), m) == labels.end()) kept.push_back(m);
  }
  return ModeRegister(std::move(kept), max_photons_);
}

std::string ModeRegister::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (i) out += ",";
    out += modes_[i].str();
  }
  return out + "]/L=" + std::to_string(max_photons_);
}

ModeRegister concat(const ModeRegister& a, const ModeRegister& b, std::optional<int> cap) {
  std::vector<ModeLabel> modes = a.modes();
  for (const auto& m : b.modes()) {
    if (a.contains(m)) throw std::invalid_argument("registers overlap on mode " + m.str());
    modes.push_back(m);
  }
  return ModeRegister(std::move(modes), cap.value_or(a.max_photons() + b.max_photons()));
}

// ---------------------------------------------------------------------------
// Basis enumeration

namespace {

void enumerate_into(std::size_t mode, int remaining, Occupation& cur,
                    std::vector<Occupation>& out) {
  if (mode == cur.size()) {
    out.push_back(cur);
    return;
  }
  for (int n = 0; n <= remaining; ++n) {
    cur[mode] = n;
    enumerate_into(mode + 1, remaining - n, cur, out);
  }
  cur[mode] = 0;
}

}  // namespace

std::vector<Occupation> enumerate_basis(const ModeRegister& reg) {
  std::vector<Occupation> out;
  Occupation cur(reg.size(), 0);
  enumerate_into(0, reg.max_photons(), cur, out);
  return out;
}

std::size_t FockBasis::Hash::operator()(const Occupation& occ) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int n : occ) h = (h ^ static_cast<std::size_t>(n)) * 1099511628211ull;
  return h;
}

FockBasis::FockBasis(const ModeRegister& reg) : reg_(reg), states_(enumerate_basis(reg)) {
  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

std::optional<std::size_t> FockBasis::index_of(const Occupation& occ) const {
  auto it = index_.find(occ);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(ModeRegister reg, Amplitudes amplitudes) : reg_(std::move(reg)) {
  for (const auto& [occ, amp] : amplitudes) add(occ, amp);
}

StateVector StateVector::basis(const ModeRegister& reg, Occupation occ) {
  StateVector v(reg);
  v.add(occ, 1.0);
  return v;
}

StateVector StateVector::vacuum(const ModeRegister& reg) {
  return basis(reg, Occupation(reg.size(), 0));
}

void StateVector::check_occupation(const Occupation& occ) const {
  if (occ.size() != reg_.size()) {
    throw std::invalid_argument("occupation has " + std::to_string(occ.size()) +
                                " entries, register has " + std::to_string(reg_.size()));
  }
  for (int n : occ) {
    if (n < 0) throw std::invalid_argument("negative occupation");
  }
  if (total_photons(occ) > reg_.max_photons()) {
    throw std::out_of_range("occupation exceeds photon cutoff of register " + reg_.str());
  }
}

void StateVector::check_compatible(const StateVector& other) const {
  if (!reg_.same_modes(other.reg_)) {
    throw std::invalid_argument("register mismatch: " + reg_.str() + " vs " + other.reg_.str());
  }
}

Complex StateVector::amplitude(const Occupation& occ) const {
  auto it = amps_.find(occ);
  return it == amps_.end() ? Complex{} : it->second;
}

void StateVector::add(const Occupation& occ, Complex value) {
  check_occupation(occ);
  amps_[occ] += value;
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& [occ, amp] : amps_) s += std::norm(amp);
  return s;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

StateVector StateVector::pruned(double tol) const {
  StateVector out(reg_);
  for (const auto& [occ, amp] : amps_) {
    if (std::abs(amp) >= tol) out.amps_.emplace(occ, amp);
  }
  return out;
}

StateVector& StateVector::operator+=(const StateVector& other) {
  check_compatible(other);
  for (const auto& [occ, amp] : other.amps_) amps_[occ] += amp;
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
  check_compatible(other);
  for (const auto& [occ, amp] : other.amps_) amps_[occ] -= amp;
  return *this;
}

StateVector& StateVector::operator*=(Complex factor) {
  for (auto& [occ, amp] : amps_) amp *= factor;
  return *this;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(StateVector v) : v_(v.pruned()) {
  const double n2 = v_.norm_squared();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw std::invalid_argument("state is not normalized (norm^2 = " + std::to_string(n2) + ")");
  }
}

PureState PureState::normalize(const StateVector& v) {
  const double n = v.norm();
  if (n < kPruneTolerance) throw std::invalid_argument("cannot normalize a zero vector");
  return PureState(Complex(1.0 / n) * v);
}

PureState PureState::basis(const ModeRegister& reg, Occupation occ) {
  return PureState(StateVector::basis(reg, std::move(occ)));
}

PureState PureState::vacuum(const ModeRegister& reg) {
  return PureState(StateVector::vacuum(reg));
}

// ---------------------------------------------------------------------------
// Free functions

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (!a.reg().same_modes(b.reg())) {
    throw std::invalid_argument("inner product across registers " + a.reg().str() + " and " +
                                b.reg().str());
  }
  const auto& small = a.amplitudes().size() <= b.amplitudes().size() ? a : b;
  const auto& large = &small == &a ? b : a;
  Complex s{};
  for (const auto& [occ, amp] : small.amplitudes()) {
    auto it = large.amplitudes().find(occ);
    if (it == large.amplitudes().end()) continue;
    s += &small == &a ? std::conj(amp) * it->second : std::conj(it->second) * amp;
  }
  return s;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  StateVector out(concat(a.reg(), b.reg()));
  for (const auto& [oa, ca] : a.amplitudes()) {
    for (const auto& [ob, cb] : b.amplitudes()) {
      Occupation occ = oa;
      occ.insert(occ.end(), ob.begin(), ob.end());
      out.add(occ, ca * cb);
    }
  }
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  return PureState(tensor(a.vector(), b.vector()));
}

StateVector embed(const StateVector& v, const ModeRegister& target) {
  std::vector<std::size_t> pos(v.reg().size());
  for (std::size_t i = 0; i < v.reg().size(); ++i) {
    auto idx = target.index_of(v.reg()[i]);
    if (!idx) {
      throw std::invalid_argument("cannot embed: mode " + v.reg()[i].str() +
                                  " missing from " + target.str());
    }
    pos[i] = *idx;
  }
  StateVector out(target);
  for (const auto& [occ, amp] : v.amplitudes()) {
    Occupation t(target.size(), 0);
    for (std::size_t i = 0; i < occ.size(); ++i) t[pos[i]] = occ[i];
    out.add(t, amp);
  }
  return out;
}

PureState embed(const PureState& v, const ModeRegister& target) {
  return PureState(embed(v.vector(), target));
}

bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol) {
  if (!a.reg().same_modes(b.reg())) return false;
  const Occupation* pivot = nullptr;
  double best = -1.0;
  for (const auto& [occ, amp] : a.amplitudes()) {
    if (std::abs(amp) > best) {
      best = std::abs(amp);
      pivot = &occ;
    }
  }
  if (pivot == nullptr || best < tol) return b.pruned(tol).empty();
  const Complex bp = b.amplitude(*pivot);
  if (std::abs(bp) < tol) return false;
  const Complex phase = (a.amplitude(*pivot) / std::abs(a.amplitude(*pivot))) /
                        (bp / std::abs(bp));
  StateVector diff = a - phase * b;
  for (const auto& [occ, amp] : diff.amplitudes()) {
    if (std::abs(amp) > tol) return false;
  }
  return true;
}

Eigen::VectorXcd to_dense(const StateVector& v, const FockBasis& basis) {
  if (!v.reg().same_modes(basis.reg())) throw std::invalid_argument("dense basis register mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (const auto& [occ, amp] : v.amplitudes()) {
    auto idx = basis.index_of(occ);
    if (!idx) throw std::out_of_range("occupation beyond dense basis cutoff");
    out(static_cast<Eigen::Index>(*idx)) = amp;
  }
  return out;
}

StateVector from_dense(const Eigen::VectorXcd& dense, const FockBasis& basis) {
  StateVector out(basis.reg());
  for (Eigen::Index i = 0; i < dense.size(); ++i) {
    if (std::abs(dense(i)) >= kPruneTolerance) out.add(basis[static_cast<std::size_t>(i)], dense(i));
  }
  return out;
}

std::string format_state(const StateVector& v, int digits) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [occ, amp] : v.amplitudes()) {
    if (std::abs(amp) < kPruneTolerance) continue;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s(%.*g%+.*gi)|", first ? "" : " + ", digits, amp.real(),
                  digits, amp.imag());
    os << buf;
    for (int n : occ) os << n;
    os << ">";
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace qsop

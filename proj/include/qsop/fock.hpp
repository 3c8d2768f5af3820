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

#include <compare>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace qsop {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kOrthTolerance = 1e-9;
inline constexpr double kPruneTolerance = 1e-12;

enum class ModeKind { TimeBin, Polarization, Arm, Tag, EveInternal };

std::string to_string(ModeKind kind);
ModeKind parse_mode_kind(std::string_view text);

/// A distinguishable photonic mode: a (kind, time-bin, channel) triple.
struct ModeLabel {
  ModeKind kind = ModeKind::TimeBin;
  int time_index = 0;
  std::string channel;

  auto operator<=>(const ModeLabel&) const = default;
  bool operator==(const ModeLabel&) const = default;

  /// Same mode, `bins` time-bins later.
  ModeLabel shifted(int bins) const;
  std::string str() const;
};

/// Occupation numbers, one per mode of the owning register.
using Occupation = std::vector<int>;

int total_photons(const Occupation& occ);

/// Ordered set of modes plus a total-photon cutoff.
class ModeRegister {
 public:
  ModeRegister() = default;
  ModeRegister(std::vector<ModeLabel> modes, int max_photons);

  const std::vector<ModeLabel>& modes() const { return modes_; }
  int max_photons() const { return max_photons_; }
  std::size_t size() const { return modes_.size(); }
  bool empty() const { return modes_.empty(); }
  const ModeLabel& operator[](std::size_t i) const { return modes_[i]; }

  std::optional<std::size_t> index_of(const ModeLabel& label) const;
  bool contains(const ModeLabel& label) const { return index_of(label).has_value(); }
  /// Throws std::out_of_range when the label is absent.
  std::size_t require(const ModeLabel& label) const;

  ModeRegister with_max_photons(int max_photons) const;
  /// Keeps `labels` in this register's order. Throws if one is absent.
  ModeRegister subset(std::span<const ModeLabel> labels) const;
  /// Modes of this register that are not in `labels`, in order.
  ModeRegister without(std::span<const ModeLabel> labels) const;

  bool same_modes(const ModeRegister& other) const { return modes_ == other.modes_; }
  bool operator==(const ModeRegister&) const = default;

  std::string str() const;

 private:
  std::vector<ModeLabel> modes_;
  int max_photons_ = 0;
};

/// Concatenation of two disjoint registers. The cutoff is the sum of both
/// cutoffs unless `cap` is given.
ModeRegister concat(const ModeRegister& a, const ModeRegister& b,
                    std::optional<int> cap = std::nullopt);

/// All occupation tuples with total photons <= max_photons, lexicographic
/// with the first mode most significant.
std::vector<Occupation> enumerate_basis(const ModeRegister& reg);

/// Index map over the truncated Fock basis of a register.
class FockBasis {
 public:
  explicit FockBasis(const ModeRegister& reg);

  std::size_t size() const { return states_.size(); }
  const Occupation& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<Occupation>& states() const { return states_; }
  std::optional<std::size_t> index_of(const Occupation& occ) const;
  const ModeRegister& reg() const { return reg_; }

 private:
  struct Hash {
    std::size_t operator()(const Occupation& occ) const noexcept;
  };
  ModeRegister reg_;
  std::vector<Occupation> states_;
  std::unordered_map<Occupation, std::size_t, Hash> index_;
};

/// Sparse, possibly unnormalized vector in a truncated Fock space. This is
/// the builder form; PureState is the validated one.
class StateVector {
 public:
  using Amplitudes = std::map<Occupation, Complex>;

  StateVector() = default;
  explicit StateVector(ModeRegister reg) : reg_(std::move(reg)) {}
  StateVector(ModeRegister reg, Amplitudes amplitudes);

  static StateVector basis(const ModeRegister& reg, Occupation occ);
  static StateVector vacuum(const ModeRegister& reg);

  const ModeRegister& reg() const { return reg_; }
  const Amplitudes& amplitudes() const { return amps_; }
  Complex amplitude(const Occupation& occ) const;
  bool empty() const { return amps_.empty(); }

  void add(const Occupation& occ, Complex value);
  double norm_squared() const;
  double norm() const;

  StateVector pruned(double tol = kPruneTolerance) const;

  StateVector& operator+=(const StateVector& other);
  StateVector& operator-=(const StateVector& other);
  StateVector& operator*=(Complex factor);

  friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
  friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
  friend StateVector operator*(Complex c, StateVector v) { return v *= c; }
  friend StateVector operator*(StateVector v, Complex c) { return v *= c; }

 private:
  void check_occupation(const Occupation& occ) const;
  void check_compatible(const StateVector& other) const;

  ModeRegister reg_;
  Amplitudes amps_;
};

/// Normalized state. Amplitudes below kPruneTolerance are dropped.
class PureState {
 public:
  /// Throws std::invalid_argument unless the norm is 1 within kNormTolerance.
  explicit PureState(StateVector v);

  /// Rescales to unit norm. Throws on a zero vector.
  static PureState normalize(const StateVector& v);
  static PureState basis(const ModeRegister& reg, Occupation occ);
  static PureState vacuum(const ModeRegister& reg);

  const StateVector& vector() const { return v_; }
  operator const StateVector&() const { return v_; }  // NOLINT
  const ModeRegister& reg() const { return v_.reg(); }
  const StateVector::Amplitudes& amplitudes() const { return v_.amplitudes(); }
  Complex amplitude(const Occupation& occ) const { return v_.amplitude(occ); }

 private:
  StateVector v_;
};

/// <a|b>. Both vectors must share the mode list.
Complex inner_product(const StateVector& a, const StateVector& b);

/// a (x) b on the concatenated register. Mode sets must be disjoint.
StateVector tensor(const StateVector& a, const StateVector& b);
PureState tensor(const PureState& a, const PureState& b);

/// Re-expresses `v` on `target`, which must contain every mode of v.reg().
/// Extra target modes are vacuum.
StateVector embed(const StateVector& v, const ModeRegister& target);
PureState embed(const PureState& v, const ModeRegister& target);

/// Equality up to a global phase, aligned on the largest amplitude of `a`.
bool equal_up_to_phase(const StateVector& a, const StateVector& b,
                       double tol = kNormTolerance);

Eigen::VectorXcd to_dense(const StateVector& v, const FockBasis& basis);
StateVector from_dense(const Eigen::VectorXcd& dense, const FockBasis& basis);

std::string format_state(const StateVector& v, int digits = 6);

}  // namespace qsop

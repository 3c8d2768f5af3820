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

#include "qsop/attacks.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "qsop/interferometer.hpp"
#include "qsop/linear_optics.hpp"
#include "qsop/protocols.hpp"

namespace qsop {

namespace {

const double kInvSqrt2 = std::sqrt(0.5);

StateVector fock(const ModeRegister& reg, std::initializer_list<std::pair<ModeLabel, int>> photons) {
  Occupation o(reg.size(), 0);
  for (const auto& [m, n] : photons) o[reg.require(m)] = n;
  return StateVector::basis(reg, o);
}

/// Splits a vector on eve (x) channel into channel slices keyed by Eve's
/// occupation.
std::map<Occupation, StateVector> slices(const StateVector& v, std::size_t eve_modes,
                                         const ModeRegister& channel) {
  std::map<Occupation, StateVector> out;
  for (const auto& [occ, amp] : v.amplitudes()) {
    const Occupation e(occ.begin(), occ.begin() + static_cast<long>(eve_modes));
    const Occupation c(occ.begin() + static_cast<long>(eve_modes), occ.end());
    out.try_emplace(e, channel).first->second.add(c, amp);
  }
  return out;
}

double support_residual(const Subspace& s, const StateVector& psi) {
  return s.residual(embed(psi, s.reg()));
}

}  // namespace

ModeLabel eve_mode(const std::string& channel, int index) {
  return {ModeKind::EveInternal, index, channel};
}

// ---------------------------------------------------------------------------
// Isometry

AttackIsometry::AttackIsometry(Subspace qsop_basis, ModeRegister eve_register,
                               std::vector<StateVector> images)
    : basis_(std::move(qsop_basis)), eve_(std::move(eve_register)) {
  if (images.size() != basis_.dim()) {
    throw std::invalid_argument("attack action defined on " + std::to_string(images.size()) +
                                " states, QSoP has dimension " + std::to_string(basis_.dim()));
  }
  int cutoff = eve_.max_photons() + basis_.reg().max_photons();
  for (const auto& img : images) cutoff = std::max(cutoff, img.reg().max_photons());
  out_ = concat(eve_, basis_.reg(), cutoff);
  for (auto& img : images) images_.push_back(embed(img, out_));
}

StateVector AttackIsometry::apply(const StateVector& psi) const {
  StateVector p;
  try {
    p = embed(psi, basis_.reg());
  } catch (const std::out_of_range& e) {
    throw std::invalid_argument(std::string("attack input lies outside the QSoP: ") + e.what());
  }
  StateVector out(out_);
  StateVector rest = p;
  for (std::size_t i = 0; i < basis_.dim(); ++i) {
    const Complex c = inner_product(basis_.basis()[i], p);
    rest -= c * basis_.basis()[i].vector();
    out += c * images_[i];
  }
  const double outside = rest.norm();
  if (outside > kOrthTolerance * std::max(1.0, p.norm())) {
    throw std::invalid_argument("attack input has weight " + std::to_string(outside) +
                                " outside the QSoP");
  }
  return out.pruned();
}

AttackCheck AttackIsometry::verify(double tol) const {
  AttackCheck r;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double dev = std::abs(inner_product(images_[j], images_[i]) - (i == j ? 1.0 : 0.0));
      r.max_inner_product_deviation = std::max(r.max_inner_product_deviation, dev);
      if (dev > tol) r.offending.push_back({"inner-product", j, i, dev});
    }
    double leak2 = 0.0;
    for (const auto& [e, v] : slices(images_[i], eve_.size(), basis_.reg())) {
      leak2 += std::pow(basis_.residual(v), 2);
    }
    const double leak = std::sqrt(leak2);
    r.max_leakage = std::max(r.max_leakage, leak);
    if (leak > tol) r.offending.push_back({"leakage", i, i, leak});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Measure-resend

MeasureResendChannel::MeasureResendChannel(Subspace support, ModeRegister eve_register,
                                           std::vector<Branch> branches)
    : support_(std::move(support)), eve_(std::move(eve_register)), branches_(std::move(branches)) {
  double total = 0.0;
  for (auto& b : branches_) {
    if (b.prior < 0.0) throw std::invalid_argument("branch " + b.name + " has a negative prior");
    total += b.prior;
    for (auto& op : b.ops) {
      eve_.require(op.record);
      for (auto& [ket, bra] : op.terms) {
        if (!ket.reg().same_modes(support_.reg()) || !bra.reg().same_modes(support_.reg())) {
          throw std::invalid_argument("branch " + b.name + ": Kraus term off the channel register");
        }
      }
    }
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw std::invalid_argument("branch priors sum to " + std::to_string(total));
  }
}

std::vector<AttackComponent> MeasureResendChannel::apply(const StateVector& psi) const {
  const StateVector p = embed(psi, support_.reg());
  const double outside = support_residual(support_, p);
  if (outside > kOrthTolerance * std::max(1.0, p.norm())) {
    throw std::invalid_argument("attack input has weight " + std::to_string(outside) +
                                " outside the channel's support");
  }
  int cutoff = 0;
  for (const auto& b : branches_) {
    for (const auto& op : b.ops) {
      for (const auto& [ket, bra] : op.terms) cutoff = std::max(cutoff, ket.reg().max_photons());
    }
  }
  const ModeRegister chan = support_.reg().with_max_photons(cutoff);
  std::vector<AttackComponent> out;
  for (const auto& b : branches_) {
    for (const auto& op : b.ops) {
      StateVector v(chan);
      for (const auto& [ket, bra] : op.terms) {
        const Complex c = inner_product(embed(bra, p.reg()), p);
        if (std::abs(c) > 0.0) v += c * embed(ket, chan);
      }
      v = v.pruned();
      if (v.empty()) continue;
      Occupation rec(eve_.size(), 0);
      rec[eve_.require(op.record)] = 1;
      out.push_back({b.prior, tensor(StateVector::basis(eve_, rec), v), b.name});
    }
  }
  return out;
}

AttackCheck MeasureResendChannel::verify(double tol) const {
  AttackCheck r;
  const auto& basis = support_.basis();
  const std::size_t d = basis.size();
  for (std::size_t bi = 0; bi < branches_.size(); ++bi) {
    // sum_k <b_i| K_k^dagger K_k |b_j>
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(d));
    for (const auto& op : branches_[bi].ops) {
      std::vector<StateVector> images;
      for (const auto& b : basis) {
        std::optional<StateVector> v;
        for (const auto& [ket, bra] : op.terms) {
          const Complex c = inner_product(bra, b.vector());
          if (!v) v = StateVector(ket.reg());
          *v += c * ket;
        }
        images.push_back(v ? *v : StateVector(support_.reg()));
      }
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          if (images[i].empty() || images[j].empty()) continue;
          g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
              inner_product(images[i], images[j]);
        }
      }
    }
    const auto n = static_cast<Eigen::Index>(d);
    const double dev = (g - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    r.max_inner_product_deviation = std::max(r.max_inner_product_deviation, dev);
    if (dev > tol) r.offending.push_back({"completeness", bi, bi, dev});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Wrapper

Attack::Attack(std::string name, AttackIsometry isometry)
    : name_(std::move(name)), impl_(std::move(isometry)) {}
Attack::Attack(std::string name, MeasureResendChannel channel)
    : name_(std::move(name)), impl_(std::move(channel)) {}

const ModeRegister& Attack::eve_register() const {
  return std::visit([](const auto& a) -> const ModeRegister& { return a.eve_register(); }, impl_);
}

const ModeRegister& Attack::channel() const {
  if (const auto* iso = isometry()) return iso->qsop_basis().reg();
  return channel_attack()->support().reg();
}

std::vector<AttackComponent> Attack::apply(const StateVector& psi) const {
  if (const auto* iso = isometry()) return {AttackComponent{1.0, iso->apply(psi), {}}};
  return channel_attack()->apply(psi);
}

AttackCheck Attack::verify(double tol) const {
  return std::visit([tol](const auto& a) { return a.verify(tol); }, impl_);
}

std::size_t Attack::qsop_dimension() const {
  if (const auto* iso = isometry()) return iso->qsop_basis().dim();
  return channel_attack()->support().dim();
}

// ---------------------------------------------------------------------------
// Constructors

Attack attack_identity(const Subspace& qsop) {
  const ModeRegister none(std::vector<ModeLabel>{}, 0);
  std::vector<StateVector> images;
  for (const auto& b : qsop.basis()) images.push_back(b.vector());
  return Attack("identity", AttackIsometry(qsop, none, std::move(images)));
}

Attack attack_pns() {
  const ModeRegister p = polarization_register(2);
  const ModeLabel eh = eve_mode("H"), ev = eve_mode("V");
  const ModeRegister e({eh, ev}, 1);
  const ModeRegister out = concat(e, p, 3);
  const ModeLabel h = pol_h(), v = pol_v();

  std::vector<PureState> basis;
  std::vector<StateVector> images;
  auto map = [&](int nh, int nv, StateVector image) {
    basis.push_back(PureState(fock(p, {{h, nh}, {v, nv}})));
    images.push_back(std::move(image));
  };
  map(0, 0, fock(out, {}));
  map(1, 0, fock(out, {{eh, 1}}));
  map(0, 1, fock(out, {{ev, 1}}));
  map(2, 0, fock(out, {{eh, 1}, {h, 1}}));
  map(0, 2, fock(out, {{ev, 1}, {v, 1}}));
  map(1, 1, kInvSqrt2 * fock(out, {{ev, 1}, {h, 1}}) + kInvSqrt2 * fock(out, {{eh, 1}, {v, 1}}));
  return Attack("pns", AttackIsometry(Subspace(p, std::move(basis)), e, std::move(images)));
}

Attack attack_tagging() {
  const ModeRegister q = polarization_register(1);
  const ModeRegister tags({tag_z(), tag_x()}, 1);
  const ModeRegister chan = concat(q, tags);
  const ModeRegister e({eve_mode("z0"), eve_mode("z1"), eve_mode("x0"), eve_mode("x1"),
                        eve_mode("pass")},
                       1);
  auto st = [&](int nh, int nv, int tz, int tx) {
    return fock(chan, {{pol_h(), nh}, {pol_v(), nv}, {tag_z(), tz}, {tag_x(), tx}});
  };
  auto proj = [](const StateVector& k) { return std::pair{k, k}; };
  const StateVector plus = kInvSqrt2 * st(1, 0, 0, 1) + kInvSqrt2 * st(0, 1, 0, 1);
  const StateVector minus = kInvSqrt2 * st(1, 0, 0, 1) - kInvSqrt2 * st(0, 1, 0, 1);

  std::vector<StateVector> support;
  for (int tz = 0; tz <= 1; ++tz) {
    for (int tx = 0; tx + tz <= 1; ++tx) {
      support.push_back(st(0, 0, tz, tx));
      support.push_back(st(1, 0, tz, tx));
      support.push_back(st(0, 1, tz, tx));
    }
  }
  Branch b{"read-tag", 1.0, {}};
  b.ops.push_back({eve_mode("z0"), {proj(st(1, 0, 1, 0))}});
  b.ops.push_back({eve_mode("z1"), {proj(st(0, 1, 1, 0))}});
  b.ops.push_back({eve_mode("x0"), {proj(plus)}});
  b.ops.push_back({eve_mode("x1"), {proj(minus)}});
  b.ops.push_back({eve_mode("pass"),
                   {proj(st(0, 0, 0, 0)), proj(st(1, 0, 0, 0)), proj(st(0, 1, 0, 0)),
                    proj(st(0, 0, 1, 0)), proj(st(0, 0, 0, 1))}});
  return Attack("tagging",
                MeasureResendChannel(orthonormalize(chan, support), e, {std::move(b)}));
}

Attack attack_trojan_pony(int m) {
  if (m < 2) throw std::invalid_argument("trojan pony needs m >= 2");
  const ModeRegister chan = polarization_register(m);
  const ModeRegister e({eve_mode("z0"), eve_mode("z1"), eve_mode("x0"), eve_mode("x1"),
                        eve_mode("none")},
                       1);
  const ModeCircuit pockels = pockels_rotation(chan, pol_h(), pol_v());
  const StateVector h = fock(chan, {{pol_h(), 1}}), v = fock(chan, {{pol_v(), 1}});
  const StateVector vac = fock(chan, {});
  const StateVector mh = fock(chan, {{pol_h(), m}}), mv = fock(chan, {{pol_v(), m}});

  Branch z{"measure-z", 0.5, {}};
  z.ops.push_back({eve_mode("z0"), {{mh, h}}});
  z.ops.push_back({eve_mode("z1"), {{mv, v}}});
  z.ops.push_back({eve_mode("none"), {{vac, vac}}});
  Branch x{"measure-x", 0.5, {}};
  x.ops.push_back({eve_mode("x0"), {{apply(pockels, mh), apply(pockels, h)}}});
  x.ops.push_back({eve_mode("x1"), {{apply(pockels, mv), apply(pockels, v)}}});
  x.ops.push_back({eve_mode("none"), {{vac, vac}}});
  const std::vector<StateVector> support{vac, h, v};
  return Attack("trojan-pony",
                MeasureResendChannel(orthonormalize(chan, support), e, {std::move(z), std::move(x)}));
}

Attack attack_fake_state() {
  const ModeRegister chan = fake_state_register();
  const ModeRegister e({eve_mode("z0"), eve_mode("z1"), eve_mode("x0"), eve_mode("x1"),
                        eve_mode("none")},
                       1);
  auto one = [&](const ModeLabel& m) { return fock(chan, {{m, 1}}); };
  auto plus = [&](int t) { return kInvSqrt2 * one(pol_h(t)) + kInvSqrt2 * one(pol_v(t)); };
  auto minus = [&](int t) { return kInvSqrt2 * one(pol_h(t)) - kInvSqrt2 * one(pol_v(t)); };
  const StateVector vac = fock(chan, {});

  Branch z{"measure-z", 0.5, {}};
  z.ops.push_back({eve_mode("z0"), {{one(pol_h(1)), one(pol_h(0))}}});
  z.ops.push_back({eve_mode("z1"), {{one(pol_v(1)), one(pol_v(0))}}});
  z.ops.push_back({eve_mode("none"), {{vac, vac}}});
  Branch x{"measure-x", 0.5, {}};
  x.ops.push_back({eve_mode("x0"), {{plus(-1), plus(0)}}});
  x.ops.push_back({eve_mode("x1"), {{minus(-1), minus(0)}}});
  x.ops.push_back({eve_mode("none"), {{vac, vac}}});
  const std::vector<StateVector> support{vac, one(pol_h(0)), one(pol_v(0))};
  return Attack("fake-state",
                MeasureResendChannel(orthonormalize(chan, support), e, {std::move(z), std::move(x)}));
}

Attack attack_reversed_space(const Subspace& qsop) {
  const ModeRegister p({alice_mode(-1), alice_mode(0), alice_mode(1), alice_mode(2)}, 1);
  if (qsop.dim() != 5) {
    throw std::invalid_argument("reversed-space attack needs a 5-dimensional QSoP, got " +
                                std::to_string(qsop.dim()));
  }
  const ModeLabel e0 = eve_mode("E0"), e1 = eve_mode("E1");
  const ModeRegister e({e0, e1}, 1);
  const ModeRegister out = concat(e, p);
  auto a = [&](int t) { return fock(p, {{alice_mode(t), 1}}); };
  auto w = [&](const ModeLabel& em, int t) { return fock(out, {{em, 1}, {alice_mode(t), 1}}); };

  std::vector<PureState> basis{PureState(fock(p, {})), PureState(a(-1)), PureState(a(0)),
                               PureState(a(1)), PureState(a(2))};
  Subspace ordered(p, std::move(basis));
  if (!same_span(ordered, qsop.embedded(p))) {
    throw std::invalid_argument("reversed-space attack: QSoP is not spanned by a@-1..a@2");
  }
  std::vector<StateVector> images{
      fock(out, {}),
      fock(out, {{alice_mode(-1), 1}}),
      0.5 * w(e0, -1) + 0.5 * w(e0, 0) + 0.5 * w(e1, 1) + 0.5 * w(e1, 2),
      -0.5 * w(e1, -1) + 0.5 * w(e1, 0) + 0.5 * w(e0, 1) - 0.5 * w(e0, 2),
      fock(out, {{alice_mode(2), 1}}),
  };
  return Attack("reversed-space", AttackIsometry(std::move(ordered), e, std::move(images)));
}

Attack attack_matrix(std::string name, Subspace qsop, ModeRegister eve_register,
                     std::vector<StateVector> images) {
  return Attack(std::move(name),
                AttackIsometry(std::move(qsop), std::move(eve_register), std::move(images)));
}

}  // namespace qsop

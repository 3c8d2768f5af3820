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

#include "qsop/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "qsop/usd.hpp"

namespace qsop {

using nlohmann::json;

ScenarioError::ScenarioError(std::string pointer, const std::string& message, int line,
                             int column)
    : std::runtime_error([&] {
        std::string where = pointer.empty() ? "/" : pointer;
        if (line > 0) where += " (line " + std::to_string(line) + ", column " +
                               std::to_string(column) + ")";
        return where + ": " + message;
      }()),
      pointer_(std::move(pointer)),
      line_(line),
      column_(column) {}

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// ---------------------------------------------------------------------------
// Reading

class Node {
 public:
  Node(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(ptr_, msg); }
  const std::string& ptr() const { return ptr_; }
  const json& raw() const { return j_; }

  void object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (const auto& [k, v] : j_.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) Node(v, child_ptr(k)).fail("unknown field '" + k + "'");
    }
  }
  bool has(const std::string& key) const { return j_.contains(key); }
  Node at(const std::string& key) const {
    if (!j_.is_object() || !j_.contains(key)) fail("missing field '" + key + "'");
    return Node(j_.at(key), child_ptr(key));
  }
  Node at(std::size_t i) const { return Node(j_.at(i), ptr_ + "/" + std::to_string(i)); }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  double num() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  Complex complex() const {
    if (j_.is_number()) return {j_.get<double>(), 0.0};
    if (!j_.is_array() || j_.size() != 2 || !j_[0].is_number() || !j_[1].is_number()) {
      fail("expected a complex number [re, im]");
    }
    return {j_[0].get<double>(), j_[1].get<double>()};
  }
  template <class F>
  auto parse(F&& f) const {
    try {
      return f(str());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

 private:
  std::string child_ptr(const std::string& key) const {
    std::string k;
    for (char c : key) {
      if (c == '~') k += "~0";
      else if (c == '/') k += "~1";
      else k += c;
    }
    return ptr_ + "/" + k;
  }

  const json& j_;
  std::string ptr_;
};

std::vector<Basis> read_bases(const Node& n) {
  std::vector<Basis> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Basis b = n.at(i).parse(parse_basis);
    for (Basis seen : out) {
      if (seen == b) n.at(i).fail("basis listed twice");
    }
    out.push_back(b);
  }
  if (out.empty()) n.fail("needs at least one basis");
  return out;
}

ModeLabel read_mode(const Node& n) {
  n.object({"kind", "t", "channel"});
  return {n.at("kind").parse(parse_mode_kind), n.has("t") ? n.at("t").integer() : 0,
          n.at("channel").str()};
}

SparseState read_state(const Node& n) {
  SparseState out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Node e = n.at(i);
    e.object({"occ", "amp"});
    Occupation occ;
    const Node o = e.at("occ");
    for (std::size_t k = 0; k < o.size(); ++k) {
      const int c = o.at(k).integer();
      if (c < 0) o.at(k).fail("negative occupation");
      occ.push_back(c);
    }
    out.emplace_back(std::move(occ), e.at("amp").complex());
  }
  return out;
}

json write_complex(Complex c) { return json::array({c.real(), c.imag()}); }

json write_state(const SparseState& s) {
  json out = json::array();
  for (const auto& [occ, amp] : s) out.push_back({{"occ", occ}, {"amp", write_complex(amp)}});
  return out;
}

json write_mode(const ModeLabel& m) {
  return {{"kind", to_string(m.kind)}, {"t", m.time_index}, {"channel", m.channel}};
}

json write_vector(const StateVector& v) {
  SparseState s(v.amplitudes().begin(), v.amplitudes().end());
  return write_state(s);
}

SparseState sparse(const StateVector& v) { return {v.amplitudes().begin(), v.amplitudes().end()}; }

// Finds where each JSON pointer's value starts. Only run on text that
// already parsed.
class Locator {
 public:
  explicit Locator(const std::string& text) : t_(text) {
    value("");
  }

  std::pair<int, int> find(std::string ptr) const {
    for (;;) {
      auto it = where_.find(ptr);
      if (it != where_.end()) return line_col(it->second);
      if (ptr.empty()) return {0, 0};
      ptr.erase(ptr.rfind('/'));
    }
  }

 private:
  void ws() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) ++i_;
  }
  std::string string() {
    std::string s;
    ++i_;
    while (i_ < t_.size() && t_[i_] != '"') {
      if (t_[i_] == '\\') {
        ++i_;
        if (t_[i_] == 'u') {
          s += '?';
          i_ += 4;
        } else {
          s += t_[i_] == 'n' ? '\n' : t_[i_] == 't' ? '\t' : t_[i_];
        }
      } else {
        s += t_[i_];
      }
      ++i_;
    }
    ++i_;
    return s;
  }
  void value(const std::string& ptr) {
    ws();
    where_.emplace(ptr, i_);
    if (i_ >= t_.size()) return;
    if (t_[i_] == '{') {
      ++i_;
      for (;;) {
        ws();
        if (t_[i_] == '}') break;
        std::string key = string();
        std::string esc;
        for (char c : key) esc += c == '~' ? "~0" : c == '/' ? "~1" : std::string(1, c);
        ws();
        ++i_;  // ':'
        value(ptr + "/" + esc);
        ws();
        if (t_[i_] == ',') ++i_;
      }
      ++i_;
    } else if (t_[i_] == '[') {
      ++i_;
      for (std::size_t k = 0;; ++k) {
        ws();
        if (t_[i_] == ']') break;
        value(ptr + "/" + std::to_string(k));
        ws();
        if (t_[i_] == ',') ++i_;
      }
      ++i_;
    } else if (t_[i_] == '"') {
      string();
    } else {
      while (i_ < t_.size() && std::string_view(",]} \t\r\n").find(t_[i_]) == std::string::npos) {
        ++i_;
      }
    }
  }
  std::pair<int, int> line_col(std::size_t off) const {
    int line = 1, col = 1;
    for (std::size_t k = 0; k < off && k < t_.size(); ++k) {
      if (t_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  const std::string& t_;
  std::size_t i_ = 0;
  std::map<std::string, std::size_t> where_;
};

}  // namespace

// ---------------------------------------------------------------------------
// JSON <-> Scenario

Scenario scenario_from_json(const json& doc) {
  const Node root(doc, "");
  root.object({"schema_version", "name", "description", "source", "setups", "detector", "attack",
               "truncation", "priors", "usd"});
  Scenario s;
  s.schema_version = root.at("schema_version").integer();
  if (s.schema_version != kSchemaVersion) {
    root.at("schema_version").fail("unsupported schema version " +
                                   std::to_string(s.schema_version));
  }
  s.name = root.at("name").str();
  if (root.has("description")) s.description = root.at("description").str();
  if (root.has("truncation")) {
    s.truncation = root.at("truncation").integer();
    if (s.truncation < 1) root.at("truncation").fail("truncation must be at least 1");
  }

  if (root.has("source")) {
    const Node n = root.at("source");
    n.object({"kind", "bases", "vacuum_weight", "alpha", "photon_number", "tag_probability"});
    SourceSpec src;
    src.kind = n.at("kind").str();
    static const std::set<std::string> kinds{"ideal-bb84", "vacuum-qubit", "weak-coherent",
                                             "tagging", "interferometric", "fake-state"};
    if (!kinds.contains(src.kind)) n.at("kind").fail("unknown source kind '" + src.kind + "'");
    if (n.has("bases")) src.bases = read_bases(n.at("bases"));
    if (src.kind == "interferometric" && src.bases.empty()) n.fail("missing field 'bases'");
    if (n.has("vacuum_weight")) src.vacuum_weight = n.at("vacuum_weight").num();
    if (n.has("alpha")) src.alpha = n.at("alpha").complex();
    if (n.has("photon_number")) src.photon_number = n.at("photon_number").integer();
    if (n.has("tag_probability")) src.tag_probability = n.at("tag_probability").num();
    s.source = src;
  }

  if (root.has("setups")) {
    const Node n = root.at("setups");
    n.object({"kind", "variant", "bases", "extended"});
    SetupSpec st;
    st.kind = n.at("kind").str();
    if (st.kind == "interferometric") {
      st.variant = n.at("variant").str();
      n.at("variant").parse(parse_variant);
    } else if (st.kind != "polarization" && st.kind != "fake-state") {
      n.at("kind").fail("unknown setup kind '" + st.kind + "'");
    }
    if (st.kind != "fake-state") st.bases = read_bases(n.at("bases"));
    if (n.has("extended")) st.extended = n.at("extended").boolean();
    s.setups = st;
  }
  if (s.source.has_value() != s.setups.has_value()) {
    root.fail("a protocol needs both 'source' and 'setups'");
  }

  if (root.has("detector")) {
    const Node n = root.at("detector");
    n.object({"kind", "double_click"});
    if (n.has("kind")) s.detector.kind = n.at("kind").parse(parse_detector_kind);
    if (n.has("double_click")) {
      s.detector.double_click = n.at("double_click").parse(parse_double_click_policy);
    }
  }

  if (root.has("attack")) {
    const Node n = root.at("attack");
    n.object({"kind", "m", "eve_modes", "eve_max_photons", "basis", "images"});
    AttackSpec a;
    a.kind = n.at("kind").str();
    static const std::set<std::string> kinds{"none",       "pns",            "tagging",
                                             "trojan-pony", "fake-state",    "reversed-space",
                                             "matrix"};
    if (!kinds.contains(a.kind)) n.at("kind").fail("unknown attack kind '" + a.kind + "'");
    if (n.has("m")) a.m = n.at("m").integer();
    if (a.kind == "trojan-pony" && a.m < 2) n.at("m").fail("needs at least 2 photons");
    if (a.kind == "matrix") {
      const Node em = n.at("eve_modes");
      for (std::size_t i = 0; i < em.size(); ++i) a.eve_modes.push_back(read_mode(em.at(i)));
      if (n.has("eve_max_photons")) a.eve_max_photons = n.at("eve_max_photons").integer();
      const Node b = n.at("basis"), im = n.at("images");
      for (std::size_t i = 0; i < b.size(); ++i) a.basis.push_back(read_state(b.at(i)));
      for (std::size_t i = 0; i < im.size(); ++i) a.images.push_back(read_state(im.at(i)));
      if (a.basis.size() != a.images.size()) {
        im.fail("attack action defined on " + std::to_string(a.images.size()) +
                " states, basis has " + std::to_string(a.basis.size()));
      }
    }
    s.attack = a;
  }

  if (root.has("priors")) {
    const Node n = root.at("priors");
    n.object({"alice_basis", "setup", "bit_one"});
    if (n.has("alice_basis")) {
      const Node ab = n.at("alice_basis");
      ab.object({"x", "y", "z"});
      for (const auto& [k, v] : ab.raw().items()) {
        s.priors.alice_basis[parse_basis(k)] = ab.at(k).num();
      }
    }
    if (n.has("setup")) {
      const Node sp = n.at("setup");
      for (std::size_t i = 0; i < sp.size(); ++i) s.priors.setup.push_back(sp.at(i).num());
    }
    if (n.has("bit_one")) {
      s.priors.bit_one = n.at("bit_one").num();
      if (s.priors.bit_one < 0.0 || s.priors.bit_one > 1.0) {
        n.at("bit_one").fail("probability outside [0, 1]");
      }
    }
  }

  if (root.has("usd")) {
    const Node n = root.at("usd");
    n.object({"thetas"});
    UsdSpec u;
    const Node th = n.at("thetas");
    for (std::size_t i = 0; i < th.size(); ++i) {
      const double x = th.at(i).num();
      if (x < 0.0 || x > std::numbers::pi / 4 + 1e-15) th.at(i).fail("theta outside [0, pi/4]");
      u.thetas.push_back(x);
    }
    s.usd = u;
  }
  if (!s.source && !s.usd) root.fail("scenario has neither a protocol nor a 'usd' section");
  return s;
}

json to_json(const Scenario& s) {
  json j;
  j["schema_version"] = s.schema_version;
  j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  j["truncation"] = s.truncation;
  if (s.source) {
    const auto& src = *s.source;
    json o{{"kind", src.kind}};
    if (!src.bases.empty()) {
      o["bases"] = json::array();
      for (Basis b : src.bases) o["bases"].push_back(to_string(b));
    }
    if (src.kind == "vacuum-qubit") o["vacuum_weight"] = src.vacuum_weight;
    if (src.kind == "weak-coherent") o["alpha"] = write_complex(src.alpha);
    if (src.photon_number) o["photon_number"] = *src.photon_number;
    if (src.kind == "tagging") o["tag_probability"] = src.tag_probability;
    j["source"] = o;
  }
  if (s.setups) {
    const auto& st = *s.setups;
    json o{{"kind", st.kind}};
    if (!st.variant.empty()) o["variant"] = st.variant;
    if (!st.bases.empty()) {
      o["bases"] = json::array();
      for (Basis b : st.bases) o["bases"].push_back(to_string(b));
    }
    if (st.kind == "fake-state") o["extended"] = st.extended;
    j["setups"] = o;
    j["detector"] = {{"kind", to_string(s.detector.kind)},
                     {"double_click", to_string(s.detector.double_click)}};
  }
  if (s.source) {
    json a{{"kind", s.attack.kind}};
    if (s.attack.kind == "trojan-pony") a["m"] = s.attack.m;
    if (s.attack.kind == "matrix") {
      a["eve_modes"] = json::array();
      for (const auto& m : s.attack.eve_modes) a["eve_modes"].push_back(write_mode(m));
      a["eve_max_photons"] = s.attack.eve_max_photons;
      a["basis"] = json::array();
      for (const auto& b : s.attack.basis) a["basis"].push_back(write_state(b));
      a["images"] = json::array();
      for (const auto& b : s.attack.images) a["images"].push_back(write_state(b));
    }
    j["attack"] = a;
  }
  const Priors defaults;
  if (!(s.priors == defaults)) {
    json p = json::object();
    if (!s.priors.alice_basis.empty()) {
      for (const auto& [b, w] : s.priors.alice_basis) p["alice_basis"][to_string(b)] = w;
    }
    if (!s.priors.setup.empty()) p["setup"] = s.priors.setup;
    p["bit_one"] = s.priors.bit_one;
    j["priors"] = p;
  }
  if (s.usd) j["usd"] = {{"thetas", s.usd->thetas}};
  return j;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ScenarioError("", "invalid JSON", line, col);
  }
  try {
    return scenario_from_json(doc);
  } catch (const ScenarioError& e) {
    const auto [line, col] = Locator(text).find(e.pointer());
    std::string msg = e.what();
    msg = msg.substr(msg.find(": ") + 2);
    throw ScenarioError(e.pointer(), msg, line, col);
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const ScenarioError& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Built-ins

std::vector<std::string> builtin_scenario_names() {
  return {"pns",          "tagging",           "trojan-pony",      "trojan-pony-counter",
          "fake-state",   "fake-state-extended", "reversed-space", "xy-bb84-baseline",
          "xz-bb84-baseline", "six-state-qsop", "xy-bb84-t1-qsop", "weak-coherent-qsop",
          "usd-theta"};
}

Scenario builtin_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  auto source = [&](const char* kind) -> SourceSpec& {
    s.source = SourceSpec{};
    s.source->kind = kind;
    return *s.source;
  };
  auto interferometric = [&](const char* variant, std::vector<Basis> bases) {
    source("interferometric").bases = bases;
    s.setups = SetupSpec{"interferometric", variant, bases};
  };
  auto polarization = [&] {
    s.setups = SetupSpec{"polarization", "", {Basis::Z, Basis::X}};
  };
  if (name == "pns") {
    s.description = "Photon-number splitting on two-photon pulses";
    source("weak-coherent").photon_number = 2;
    polarization();
    s.truncation = 2;
    s.attack.kind = "pns";
  } else if (name == "tagging") {
    s.description = "Tag-reading measure-resend on a tagged polarization source";
    source("tagging").tag_probability = 0.5;
    polarization();
    s.attack.kind = "tagging";
  } else if (name == "trojan-pony" || name == "trojan-pony-counter") {
    s.description = "Measure and resend m identical photons";
    source("ideal-bb84");
    polarization();
    s.truncation = 10;
    s.attack.kind = "trojan-pony";
    s.attack.m = 10;
    if (name == "trojan-pony-counter") {
      s.detector = {DetectorKind::Counter, DoubleClickPolicy::Error};
    }
  } else if (name == "fake-state" || name == "fake-state-extended") {
    s.description = "Timing-shifted resend into partly overlapping detection windows";
    source("fake-state");
    s.setups = SetupSpec{"fake-state", "", {}, name == "fake-state-extended"};
    s.attack.kind = "fake-state";
  } else if (name == "reversed-space") {
    s.description = "Attack on the space reached by Bob's inverse transformation";
    interferometric("xz-bb84", {Basis::X, Basis::Z});
    s.attack.kind = "reversed-space";
  } else if (name == "xy-bb84-baseline" || name == "xy-bb84-t1-qsop") {
    s.description = "Time-bin BB84 in the x and y bases, detectors open at t1 only";
    interferometric("xy-bb84", {Basis::X, Basis::Y});
  } else if (name == "xz-bb84-baseline") {
    s.description = "Time-bin BB84 in the x and z bases";
    interferometric("xz-bb84", {Basis::X, Basis::Z});
  } else if (name == "six-state-qsop") {
    s.description = "Time-bin six-state protocol";
    interferometric("xyz-six-state", {Basis::X, Basis::Y, Basis::Z});
  } else if (name == "weak-coherent-qsop") {
    s.description = "Weak coherent polarization BB84 truncated at two photons";
    source("weak-coherent");
    polarization();
    s.truncation = 2;
  } else if (name == "usd-theta") {
    s.description = "Unambiguous discrimination of two non-orthogonal qubit states";
    s.usd = UsdSpec{{0.0, std::numbers::pi / 12, std::numbers::pi / 6, std::numbers::pi / 4}};
  } else {
    std::string known;
    for (const auto& n : builtin_scenario_names()) known += " " + n;
    throw std::invalid_argument("unknown built-in scenario '" + name + "'; known:" + known);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Model construction

namespace {

AliceSource make_source(const Scenario& s) {
  const SourceSpec& src = *s.source;
  try {
    if (src.kind == "ideal-bb84") return source_ideal_bb84();
    if (src.kind == "vacuum-qubit") return source_vacuum_qubit(src.vacuum_weight);
    if (src.kind == "weak-coherent") {
      return source_weak_coherent(src.alpha, s.truncation, src.photon_number);
    }
    if (src.kind == "tagging") return source_tagging(src.tag_probability);
    if (src.kind == "interferometric") return source_interferometric(src.bases);
    return source_fake_state();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("/source", e.what());
  }
}

std::pair<std::vector<MeasurementSetup>, ModeRegister> make_setups(const Scenario& s) {
  const SetupSpec& st = *s.setups;
  std::vector<MeasurementSetup> out;
  try {
    if (st.kind == "polarization") {
      for (Basis b : st.bases) out.push_back(setup_polarization(b, s.detector, s.truncation));
      return {out, polarization_register(s.truncation)};
    }
    if (s.truncation != 1) {
      throw ScenarioError("/truncation", st.kind + " setups are single-photon models; truncation " +
                                             std::to_string(s.truncation) + " is unsupported");
    }
    if (st.kind == "interferometric") {
      const auto v = parse_variant(st.variant);
      for (Basis b : st.bases) out.push_back(setup_interferometric(v, b, s.detector));
      return {out, interferometric_channel(v)};
    }
    out = setup_fake_state_scenario(st.extended);
    for (auto& m : out) m.model = s.detector;
    return {out, fake_state_register()};
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("/setups", e.what());
  }
}

void require_channel(const Attack& a, const ModeRegister& channel) {
  for (const auto& m : a.channel().modes()) {
    if (!channel.contains(m)) {
      throw ScenarioError("/attack", "attack " + a.name() + " acts on mode " + m.str() +
                                         ", which is not on the channel " + channel.str());
    }
  }
}

Attack make_attack(const Scenario& s, const ModeRegister& channel, const Subspace& h_p) {
  const AttackSpec& a = s.attack;
  try {
    if (a.kind == "none") return attack_identity(h_p);
    if (a.kind == "pns") return attack_pns();
    if (a.kind == "tagging") return attack_tagging();
    if (a.kind == "trojan-pony") {
      if (s.truncation < a.m) {
        throw ScenarioError("/truncation", "trojan-pony with m = " + std::to_string(a.m) +
                                               " needs truncation >= m, got " +
                                               std::to_string(s.truncation));
      }
      return attack_trojan_pony(a.m);
    }
    if (a.kind == "fake-state") return attack_fake_state();
    if (a.kind == "reversed-space") return attack_reversed_space(h_p);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("/attack", e.what());
  }

  const ModeRegister eve(a.eve_modes, a.eve_max_photons);
  const ModeRegister out = concat(eve, channel, eve.max_photons() + channel.max_photons());
  auto build = [](const SparseState& sp, const ModeRegister& reg, const std::string& ptr) {
    StateVector v(reg);
    for (std::size_t k = 0; k < sp.size(); ++k) {
      if (sp[k].first.size() != reg.size()) {
        throw ScenarioError(ptr + "/" + std::to_string(k) + "/occ",
                            "occupation has " + std::to_string(sp[k].first.size()) +
                                " entries, register " + reg.str() + " has " +
                                std::to_string(reg.size()));
      }
      try {
        v.add(sp[k].first, sp[k].second);
      } catch (const std::exception& e) {
        throw ScenarioError(ptr + "/" + std::to_string(k), e.what());
      }
    }
    return v;
  };
  std::vector<PureState> basis;
  std::vector<StateVector> images;
  for (std::size_t i = 0; i < a.basis.size(); ++i) {
    const std::string ptr = "/attack/basis/" + std::to_string(i);
    try {
      basis.emplace_back(build(a.basis[i], channel, ptr));
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(ptr, e.what());
    }
    images.push_back(build(a.images[i], out, "/attack/images/" + std::to_string(i)));
  }
  try {
    return attack_matrix("matrix", Subspace(channel, std::move(basis)), eve, std::move(images));
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("/attack/basis", e.what());
  }
}

}  // namespace

BuiltScenario build_model(const Scenario& s) {
  if (!s.source) throw ScenarioError("", "scenario has no protocol to build");
  AliceSource source = make_source(s);
  auto [setups, setup_channel] = make_setups(s);

  std::vector<ModeLabel> modes = setup_channel.modes();
  for (const auto& m : source.reg.modes()) {
    if (!setup_channel.contains(m)) modes.push_back(m);
  }
  const ModeRegister channel(modes, std::max(setup_channel.max_photons(),
                                             source.reg.max_photons()));

  for (Basis b : source.bases) {
    bool found = false;
    for (const auto& st : setups) found = found || st.basis == b;
    if (!found) throw ScenarioError("/setups", "Alice's basis " + to_string(b) + " has no setup");
  }

  std::vector<BobSetup> bob;
  for (const auto& st : setups) bob.push_back(st.bob_setup());
  std::vector<PureState> alice;
  for (const auto& c : source.components()) alice.push_back(embed(c, channel));
  QsopReport report;
  try {
    report = compute_qsop(alice, bob, channel);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("/setups", e.what());
  }

  Attack attack = make_attack(s, channel, report.h_p);
  require_channel(attack, channel);
  if (attack.is_isometry() && attack.qsop_dimension() != report.h_p.dim()) {
    throw ScenarioError("/attack", "attack " + attack.name() + " is defined on a " +
                                       std::to_string(attack.qsop_dimension()) +
                                       "-dimensional space but the QSoP has dimension " +
                                       std::to_string(report.h_p.dim()));
  }

  Priors priors = s.priors;
  if (!priors.setup.empty() && priors.setup.size() != setups.size()) {
    throw ScenarioError("/priors/setup", "expected " + std::to_string(setups.size()) +
                                             " setup priors, got " +
                                             std::to_string(priors.setup.size()));
  }
  auto check_sum = [](double total, const std::string& ptr) {
    if (std::abs(total - 1.0) > 1e-9) {
      throw ScenarioError(ptr, "priors sum to " + fmt("%.12g", total) + ", not 1");
    }
  };
  if (!priors.setup.empty()) {
    double t = 0;
    for (double w : priors.setup) t += w;
    check_sum(t, "/priors/setup");
  }
  if (!priors.alice_basis.empty()) {
    double t = 0;
    for (const auto& [b, w] : priors.alice_basis) {
      if (std::find(source.bases.begin(), source.bases.end(), b) == source.bases.end()) {
        throw ScenarioError("/priors/alice_basis/" + to_string(b), "Alice never uses this basis");
      }
      t += w;
    }
    check_sum(t, "/priors/alice_basis");
  }

  ProtocolModel model{s.name, std::move(source), channel, std::move(setups), std::move(attack),
                      std::move(priors)};
  return {std::move(model), std::move(report)};
}

AttackSpec expand_attack(const Scenario& s) {
  const auto built = build_model(s);
  const auto* iso = built.model.attack.isometry();
  if (!iso) throw ScenarioError("/attack", "attack " + s.attack.kind + " is not an isometry");
  const ModeRegister& channel = built.model.channel;
  const ModeRegister& eve = iso->eve_register();
  const ModeRegister out = concat(eve, channel, eve.max_photons() + channel.max_photons());
  AttackSpec a;
  a.kind = "matrix";
  a.eve_modes = eve.modes();
  a.eve_max_photons = eve.max_photons();
  for (std::size_t i = 0; i < iso->qsop_basis().dim(); ++i) {
    a.basis.push_back(sparse(embed(iso->qsop_basis().basis()[i].vector(), channel)));
    a.images.push_back(sparse(embed(iso->images()[i], out)));
  }
  return a;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

json register_json(const ModeRegister& reg) {
  json modes = json::array();
  for (const auto& m : reg.modes()) modes.push_back(m.str());
  return {{"modes", modes}, {"max_photons", reg.max_photons()}};
}

json subspace_json(const Subspace& s) {
  json j = register_json(s.reg());
  j["vectors"] = json::array();
  for (const auto& b : s.basis()) j["vectors"].push_back(write_vector(b.vector()));
  return j;
}

json dims_json(const QsopReport& r) {
  return {{"h_a", r.h_a.dim()}, {"h_b_inv", r.h_b_inv.dim()}, {"h_p", r.h_p.dim()}};
}

std::string dims_text(const QsopReport& r) {
  return "dim H^A = " + std::to_string(r.h_a.dim()) + "\ndim H^{B^-1} = " +
         std::to_string(r.h_b_inv.dim()) + "\ndim H^P = " + std::to_string(r.h_p.dim()) + "\n";
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }
std::string optional_text(const std::optional<double>& x) {
  return x ? fmt("%.6f", *x) : std::string("undefined");
}

struct UsdRow {
  double theta;
  UsdVariant variant;
  int bit;
  UsdDistribution d;
};

std::vector<UsdRow> usd_rows(const UsdSpec& u) {
  std::vector<UsdRow> rows;
  for (double th : u.thetas) {
    for (auto v : {UsdVariant::Ancilla, UsdVariant::Embedded}) {
      for (int bit : {0, 1}) rows.push_back({th, v, bit, usd_measure(th, v, usd_input(th, bit, v))});
    }
  }
  return rows;
}

const char* variant_name(UsdVariant v) { return v == UsdVariant::Ancilla ? "ancilla" : "embedded"; }

}  // namespace

CommandResult cmd_qsop(const Scenario& s) {
  CommandResult r;
  r.doc["scenario"] = s.name;
  if (!s.source) {
    r.text = s.name + ": no protocol, nothing to analyse\n";
    r.doc["qsop"] = nullptr;
    return r;
  }
  const auto built = build_model(s);
  const auto& q = built.qsop;
  r.doc["qsop"] = {{"dims", dims_json(q)},
                   {"bases",
                    {{"h_a", subspace_json(q.h_a)},
                     {"h_b_inv", subspace_json(q.h_b_inv)},
                     {"h_p", subspace_json(q.h_p)}}}};
  json contrib = json::array();
  for (const auto& c : q.contributions) {
    json dims = json::array();
    for (const auto& t : c.traced) dims.push_back(t.dim());
    contrib.push_back({{"setup", c.setup}, {"traced_dims", dims}});
  }
  r.doc["qsop"]["contributions"] = contrib;

  std::string t = s.name + "\n" + dims_text(q);
  t += "H^P basis on " + q.h_p.reg().str() + ":\n";
  for (std::size_t i = 0; i < q.h_p.dim(); ++i) {
    t += "  [" + std::to_string(i) + "] " + format_state(q.h_p.basis()[i].vector()) + "\n";
  }
  r.text = t;
  return r;
}

CommandResult cmd_simulate(const Scenario& s) {
  CommandResult r;
  r.doc["scenario"] = s.name;
  std::string t = s.name + "\n";
  if (s.usd) {
    json rows = json::array();
    t += "theta      variant   bit  conclusive0  conclusive1  inconclusive\n";
    for (const auto& row : usd_rows(*s.usd)) {
      rows.push_back({{"theta", row.theta},
                      {"variant", variant_name(row.variant)},
                      {"bit", row.bit},
                      {"conclusive0", row.d.conclusive0},
                      {"conclusive1", row.d.conclusive1},
                      {"inconclusive", row.d.inconclusive}});
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-10.6f %-9s %-4d %-12.6f %-12.6f %.6f\n", row.theta,
                    variant_name(row.variant), row.bit, row.d.conclusive0, row.d.conclusive1,
                    row.d.inconclusive);
      t += buf;
    }
    r.doc["metrics"]["usd"] = rows;
  }
  if (s.source) {
    const auto built = build_model(s);
    const auto rounds = evaluate_rounds_omp(built.model);
    const auto m = aggregate(built.model, rounds);
    r.doc["qsop"] = {{"dims", dims_json(built.qsop)}};
    json table = json::array();
    t += "alice  setup            bob  bit0      bit1      loss      error\n";
    for (const auto& row : m.table) {
      table.push_back({{"alice_basis", to_string(row.alice_basis)},
                       {"alice_bit", row.alice_bit},
                       {"setup", row.setup},
                       {"bob_basis", to_string(row.bob_basis)},
                       {"bit0", row.probability[0]},
                       {"bit1", row.probability[1]},
                       {"loss", row.probability[2]},
                       {"error", row.probability[3]}});
      if (row.branches.size() > 1 || (!row.branches.empty() && !row.branches[0].name.empty())) {
        json br = json::array();
        for (const auto& b : row.branches) {
          br.push_back({{"name", b.name},
                        {"weight", b.weight},
                        {"bit0", b.probability[0]},
                        {"bit1", b.probability[1]},
                        {"loss", b.probability[2]},
                        {"error", b.probability[3]}});
        }
        table.back()["branches"] = br;
      }
      char buf[200];
      std::snprintf(buf, sizeof buf, "%s%d     %-16s %-4s %-9.6f %-9.6f %-9.6f %.6f\n",
                    to_string(row.alice_basis).c_str(), row.alice_bit, row.setup.c_str(),
                    to_string(row.bob_basis).c_str(), row.probability[0], row.probability[1],
                    row.probability[2], row.probability[3]);
      t += buf;
    }
    json per = json::object();
    for (const auto& [b, g] : m.eve_guess_per_basis) per[to_string(b)] = g;
    r.doc["metrics"].update({{"qber", optional_json(m.qber)},
                             {"error_rate", optional_json(m.error_rate)},
                             {"loss", m.loss_rate},
                             {"sifted_loss", m.sifted_loss_rate},
                             {"double_click", m.double_click_rate},
                             {"out_of_window", m.anomaly_rate},
                             {"eve_guess", optional_json(m.eve_guess)},
                             {"eve_guess_per_basis", per},
                             {"table", table}});
    t += "qber " + optional_text(m.qber) + "\n";
    t += "error rate " + optional_text(m.error_rate) + "\n";
    t += "loss " + fmt("%.6f", m.loss_rate) + "\n";
    t += "sifted loss " + fmt("%.6f", m.sifted_loss_rate) + "\n";
    t += "double click " + fmt("%.6f", m.double_click_rate) + "\n";
    t += "out of window " + fmt("%.6f", m.anomaly_rate) + "\n";
    t += "eve_guess " + optional_text(m.eve_guess);
    for (const auto& [b, g] : m.eve_guess_per_basis) t += "  " + to_string(b) + ": " + fmt("%.6f", g);
    t += "\n";
  }
  r.text = t;
  return r;
}

CommandResult cmd_verify(const Scenario& s) {
  CommandResult r;
  r.doc["scenario"] = s.name;
  json checks = json::object();
  std::string t = s.name + "\n";
  auto add = [&](const std::string& name, double dev, double tol, std::string detail = {},
                 std::optional<bool> verdict = std::nullopt) {
    const bool ok = verdict ? *verdict : dev <= tol;
    r.ok = r.ok && ok;
    checks[name] = {{"deviation", dev}, {"tolerance", tol}, {"passed", ok}};
    if (!detail.empty()) checks[name]["detail"] = detail;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-4s %-40s max deviation %.3e (tolerance %.0e)", ok ? "PASS" : "FAIL",
                  name.c_str(), dev, tol);
    t += buf;
    if (!detail.empty()) t += "  " + detail;
    t += "\n";
  };

  if (s.usd) {
    double conc = 0, mis = 0, agree = 0;
    const auto rows = usd_rows(*s.usd);
    for (const auto& row : rows) {
      const double want = 2 * std::pow(std::sin(row.theta), 2);
      conc = std::max(conc, std::abs(row.d.conclusive0 + row.d.conclusive1 - want));
      mis = std::max(mis, row.bit == 0 ? row.d.conclusive1 : row.d.conclusive0);
    }
    for (std::size_t i = 0; i + 2 < rows.size(); i += 4) {
      for (std::size_t b = 0; b < 2; ++b) {
        const auto& a = rows[i + b].d;
        const auto& e = rows[i + 2 + b].d;
        agree = std::max({agree, std::abs(a.conclusive0 - e.conclusive0),
                          std::abs(a.conclusive1 - e.conclusive1),
                          std::abs(a.inconclusive - e.inconclusive)});
      }
    }
    add("usd-conclusive-probability", conc, 1e-10);
    add("usd-misidentification", mis, 1e-10);
    add("usd-variant-agreement", agree, 1e-10);
  }

  if (s.source) {
    const auto built = build_model(s);
    const auto& model = built.model;
    for (const auto& st : model.setups) {
      add("unitarity:" + st.name, st.circuit.unitarity_deviation(), kUnitarityTolerance);
      add("povm-completeness:" + st.name, povm_completeness_deviation(st), 1e-9);
    }
    const AttackCheck ac = model.attack.verify();
    std::string detail;
    for (const auto& o : ac.offending) {
      if (!detail.empty()) detail += "; ";
      detail += o.kind + " on basis pair (" + std::to_string(o.i) + ", " + std::to_string(o.j) +
                ") deviation " + fmt("%.3e", o.deviation);
    }
    add(std::string(model.attack.is_isometry() ? "isometry:" : "channel-completeness:") +
            model.attack.name(),
        std::max(ac.max_inner_product_deviation, ac.max_leakage), kOrthTolerance, detail,
        ac.passed());

    double confine = 0.0;
    for (const auto& c : model.source.components()) {
      const StateVector v = embed(c.vector(), model.channel);
      if (const auto* iso = model.attack.isometry()) {
        confine = std::max(confine, iso->qsop_basis().residual(embed(v, iso->qsop_basis().reg())));
      } else {
        const auto& sup = model.attack.channel_attack()->support();
        confine = std::max(confine, sup.residual(embed(v, sup.reg())));
      }
    }
    add("attack-domain-covers-alice", confine, kOrthTolerance);

    double prob = 0.0;
    for (const auto& rd : evaluate_rounds_serial(model)) prob = std::max(prob, std::abs(rd.total() - 1.0));
    add("probability-conservation", prob, 1e-9);
  }
  r.doc["checks"] = checks;
  r.doc["passed"] = r.ok;
  t += r.ok ? "PASS\n" : "FAIL\n";
  r.text = t;
  return r;
}

namespace {

json rounded(const json& j) {
  if (j.is_number_float()) {
    double x = std::stod(fmt("%.12g", j.get<double>()));
    if (x == 0.0) x = 0.0;
    return x;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& e : j) out.push_back(rounded(e));
    return out;
  }
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = rounded(v);
    return out;
  }
  return j;
}

}  // namespace

std::string dump_json(const json& doc) { return rounded(doc).dump(2) + "\n"; }

}  // namespace qsop

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

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsop/metrics.hpp"
#include "qsop/qsop.hpp"

namespace qsop {

inline constexpr int kSchemaVersion = 1;

/// Raised for malformed scenarios. `pointer` is a JSON pointer to the bad
/// value; line and column are filled in when the source text is known.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string pointer, const std::string& message, int line = 0, int column = 0);
  const std::string& pointer() const { return pointer_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string pointer_;
  int line_;
  int column_;
};

using SparseState = std::vector<std::pair<Occupation, Complex>>;

struct SourceSpec {
  std::string kind;  // ideal-bb84, vacuum-qubit, weak-coherent, tagging, interferometric, fake-state
  std::vector<Basis> bases;
  double vacuum_weight = 0.0;
  Complex alpha{0.1, 0.0};
  std::optional<int> photon_number;
  double tag_probability = 0.5;
  bool operator==(const SourceSpec&) const = default;
};

struct SetupSpec {
  std::string kind;     // polarization, interferometric, fake-state
  std::string variant;  // interferometric only
  std::vector<Basis> bases;
  bool extended = false;  // fake-state only
  bool operator==(const SetupSpec&) const = default;
};

struct AttackSpec {
  std::string kind = "none";  // none, pns, tagging, trojan-pony, fake-state, reversed-space, matrix
  int m = 10;
  // matrix only
  std::vector<ModeLabel> eve_modes;
  int eve_max_photons = 1;
  std::vector<SparseState> basis;   // on the channel register
  std::vector<SparseState> images;  // on eve modes followed by channel modes
  bool operator==(const AttackSpec&) const = default;
};

struct UsdSpec {
  std::vector<double> thetas;
  bool operator==(const UsdSpec&) const = default;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name;
  std::string description;
  std::optional<SourceSpec> source;
  std::optional<SetupSpec> setups;
  DetectorModel detector;
  AttackSpec attack;
  int truncation = 1;
  Priors priors;
  std::optional<UsdSpec> usd;
  bool operator==(const Scenario&) const = default;
};

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Scenario& s);

/// Parses scenario text; errors carry line and column within `text`.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

std::vector<std::string> builtin_scenario_names();
Scenario builtin_scenario(const std::string& name);

/// Everything derived from a scenario that has a protocol.
struct BuiltScenario {
  ProtocolModel model;
  QsopReport qsop;
};

BuiltScenario build_model(const Scenario& s);

/// Rewrites an isometric attack as an explicit matrix spec.
AttackSpec expand_attack(const Scenario& s);

struct CommandResult {
  nlohmann::json doc;
  std::string text;
  bool ok = true;
};

CommandResult cmd_qsop(const Scenario& s);
CommandResult cmd_simulate(const Scenario& s);
CommandResult cmd_verify(const Scenario& s);

/// Stable serialization with values rounded to 12 significant digits.
std::string dump_json(const nlohmann::json& doc);

}  // namespace qsop

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

// qsop-lab: QSoP analysis and attack simulation from scenario files.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsop/scenario.hpp"

namespace {

struct Input {
  std::string file;
  std::string builtin;
  std::string json_out;
  std::optional<int> truncation;
};

void add_input_options(CLI::App* cmd, Input& in) {
  cmd->add_option("file", in.file, "Scenario JSON file");
  cmd->add_option("--scenario", in.builtin, "Built-in scenario name");
  cmd->add_option("--json", in.json_out, "Write machine-readable results here ('-' for stdout)");
  cmd->add_option("--truncation", in.truncation, "Override the photon-number truncation")
      ->check(CLI::PositiveNumber);
}

qsop::Scenario resolve(const Input& in) {
  if (in.file.empty() == in.builtin.empty()) {
    throw std::invalid_argument("give exactly one of a scenario file or --scenario <name>");
  }
  qsop::Scenario s = in.builtin.empty() ? qsop::load_scenario(in.file)
                                        : qsop::builtin_scenario(in.builtin);
  if (in.truncation) s.truncation = *in.truncation;
  return s;
}

void emit(const Input& in, const qsop::CommandResult& r) {
  if (in.json_out == "-") {
    std::cout << qsop::dump_json(r.doc);
    return;
  }
  std::cout << r.text;
  if (!in.json_out.empty()) {
    std::ofstream out(in.json_out);
    if (!out) throw std::runtime_error("cannot write " + in.json_out);
    out << qsop::dump_json(r.doc);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum space of the protocol: analysis and attack simulation"};
  app.require_subcommand(1);

  Input in;
  auto* qsop_cmd = app.add_subcommand("qsop", "Compute H^A, H^{B^-1} and H^P");
  auto* sim_cmd = app.add_subcommand("simulate", "Exact outcome statistics under an attack");
  auto* verify_cmd = app.add_subcommand("verify", "Structural checks; exit 1 on any failure");
  for (auto* c : {qsop_cmd, sim_cmd, verify_cmd}) add_input_options(c, in);

  std::string dump_name;
  bool list = false, expand = false;
  auto* scen_cmd = app.add_subcommand("scenario", "Print a built-in scenario as JSON");
  scen_cmd->add_option("name", dump_name, "Built-in scenario name");
  scen_cmd->add_flag("--list", list, "List built-in scenario names");
  scen_cmd->add_flag("--expand-attack", expand, "Write the attack as an explicit matrix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (scen_cmd->parsed()) {
      if (list || dump_name.empty()) {
        for (const auto& n : qsop::builtin_scenario_names()) std::cout << n << "\n";
        return 0;
      }
      qsop::Scenario s = qsop::builtin_scenario(dump_name);
      if (expand) s.attack = qsop::expand_attack(s);
      std::cout << qsop::dump_json(qsop::to_json(s));
      return 0;
    }
    const qsop::Scenario s = resolve(in);
    qsop::CommandResult r;
    if (qsop_cmd->parsed()) r = qsop::cmd_qsop(s);
    if (sim_cmd->parsed()) r = qsop::cmd_simulate(s);
    if (verify_cmd->parsed()) r = qsop::cmd_verify(s);
    emit(in, r);
    return r.ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "qsop-lab: " << e.what() << "\n";
    return 2;
  }
}

// Copyright 2026 The orlab Authors
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

// Command-line front end. Flags are folded into the same JSON config a
// --config file would hold, so both paths share validation and reports.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orlab/run.hpp"

namespace {

using nlohmann::json;
using orlab::run::CommandSpec;
using orlab::run::ConfigError;

struct Leaf {
  const CommandSpec* spec = nullptr;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::string family, p, knots, format, out, config;
};

json load_file(const std::string& path, const std::string& param) {
  std::ifstream in(path);
  if (!in) throw ConfigError(param, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(param, std::string("malformed JSON: ") + e.what());
  }
}

json leaf_config(const Leaf& leaf) {
  json j = json::object();
  if (!leaf.config.empty()) {
    j = load_file(leaf.config, "config");
    if (j.contains("command") && j.at("command") != leaf.spec->name) {
      throw ConfigError("command", "config file is for '" + j.at("command").dump() + "'");
    }
  }
  j["command"] = leaf.spec->name;
  for (const auto& [name, value] : leaf.values) {
    if (!leaf.app->get_option("--" + name)->empty()) j["params"][name] = value;
  }
  if (!leaf.family.empty()) {
    json phi{{"family", leaf.family}};
    if (!leaf.p.empty()) {
      try {
        phi["p"] = std::stod(leaf.p);
      } catch (const std::exception&) {
        throw ConfigError("p", "expected a number, got '" + leaf.p + "'");
      }
    }
    if (!leaf.knots.empty()) phi["knots"] = leaf.knots;
    j["phi"] = phi;
  } else if (!leaf.p.empty() || !leaf.knots.empty()) {
    throw ConfigError("family", "--p and --knots need --family");
  }
  if (!leaf.format.empty()) j["output"]["format"] = leaf.format;
  if (!leaf.out.empty()) j["output"]["path"] = leaf.out;
  return j;
}

int run_json(const json& j) {
  orlab::run::RunConfig cfg;
  try {
    cfg = orlab::run::parse_config(j);
  } catch (const orlab::Error& e) {
    std::cerr << "orlab: " << e.what() << '\n';
    return orlab::run::kInputError;
  }
  std::string summary;
  int code = orlab::run::kInputError;
  try {
    code = orlab::run::run(cfg, &summary);
  } catch (const orlab::Error& e) {
    std::cerr << "orlab: " << e.what() << '\n';
    return orlab::run::kInputError;
  }
  std::cout << cfg.command << ": " << summary << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orlab: numerical laboratory for Orlicz function spaces on [0,1]"};
  app.set_version_flag("--version", std::string(orlab::run::kToolVersion));
  std::string config_path;
  std::string verify_path;
  std::string verify_out;
  app.add_option("--config", config_path, "run config (JSON document with command, phi, params, output)");
  app.add_option("--verify", verify_path, "verify an externally produced certificate JSON");
  app.add_option("--out", verify_out, "report path for --verify");
  app.require_subcommand(0, 1);

  std::map<std::string, CLI::App*> groups;
  std::vector<std::unique_ptr<Leaf>> leaves;
  for (const auto& spec : orlab::run::command_table()) {
    const auto space = spec.name.find(' ');
    CLI::App* parent = &app;
    std::string leaf_name = spec.name;
    if (space != std::string::npos) {
      const std::string group = spec.name.substr(0, space);
      leaf_name = spec.name.substr(space + 1);
      if (!groups.count(group)) {
        groups[group] = app.add_subcommand(group, group + " commands");
        groups[group]->require_subcommand(1);
      }
      parent = groups[group];
    }
    auto leaf = std::make_unique<Leaf>();
    leaf->spec = &spec;
    leaf->app = parent->add_subcommand(leaf_name, spec.help);
    for (const auto& p : spec.params) {
      if (p.type == orlab::run::ParamType::any && spec.name == "sweep") continue;
      leaf->values[p.name];
    }
    for (auto& [name, value] : leaf->values) {
      const auto it = std::find_if(spec.params.begin(), spec.params.end(), [&](const auto& p) { return p.name == name; });
      std::string help = it->help;
      if (!it->fallback.is_null()) help += " (default " + it->fallback.dump() + ")";
      leaf->app->add_option("--" + name, value, help);
    }
    if (spec.phi != "none") {
      leaf->app->add_option("--family", leaf->family, "power | power-log | exp-minus-linear | linear | piecewise-linear");
      leaf->app->add_option("--p", leaf->p, "exponent of power and power-log");
      leaf->app->add_option("--knots", leaf->knots, "piecewise-linear knots 't:value,...'");
    }
    leaf->app->add_option("--format", leaf->format, "json (default) or csv");
    leaf->app->add_option("--out", leaf->out, "report path (default $ORLAB_OUT_DIR/<command>.<format>)");
    leaf->app->add_option("--config", leaf->config, "config file; flags override its params");
    leaves.push_back(std::move(leaf));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return orlab::run::kInputError;
  }

  try {
    for (const auto& leaf : leaves) {
      if (leaf->app->parsed()) return run_json(leaf_config(*leaf));
    }
    if (!verify_path.empty()) {
      json j{{"command", "counterexample verify"}, {"params", {{"certificate", verify_path}}}};
      if (!verify_out.empty()) j["output"]["path"] = verify_out;
      return run_json(j);
    }
    if (!config_path.empty()) return run_json(load_file(config_path, "config"));
  } catch (const orlab::Error& e) {
    std::cerr << "orlab: " << e.what() << '\n';
    return orlab::run::kInputError;
  }
  std::cout << app.help();
  return orlab::run::kInputError;
}

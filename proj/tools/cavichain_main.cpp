// Copyright 2026 The cavichain authors
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

#include <iostream>

#include "CLI11.hpp"

#include "cavichain/cavichain.hpp"

namespace {

constexpr const char* kSubcommands[] = {"blocks",     "steady", "relax",
                                        "covariance", "pair",   "window",
                                        "oracle-check", "identities"};

bool known_subcommand(const std::string& s) {
  for (const char* c : kSubcommands)
    if (s == c) return true;
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cavichain;

  CLI::App app{
      "cavichain: Gaussian dynamics of a damped cavity under repeated "
      "interaction with a chain of modes"};
  app.allow_extras();

  std::string subcommand;
  std::string config_path;
  app.add_option("subcommand", subcommand,
                 "one of: blocks steady relax covariance pair window "
                 "oracle-check identities")
      ->required();
  app.add_option("--config", config_path, "JSON scenario configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? exit_usage : exit_ok;
  }

  try {
    if (!known_subcommand(subcommand)) {
      std::cerr << "unknown subcommand: " << subcommand << "\n";
      return exit_usage;
    }
    ScenarioConfig cfg = config_path.empty() ? ScenarioConfig::defaults()
                                             : ScenarioConfig::from_file(config_path);

    // Flat --key value overrides with dotted paths, e.g. --params.eta 0.7
    const auto leftovers = app.remaining();
    for (std::size_t i = 0; i < leftovers.size(); ++i) {
      std::string key = leftovers[i];
      if (key.rfind("--", 0) != 0)
        throw config_error("expected --section.key, got: " + key);
      key = key.substr(2);
      const std::size_t eq = key.find('=');
      std::string value;
      if (eq != std::string::npos) {
        value = key.substr(eq + 1);
        key = key.substr(0, eq);
      } else {
        if (i + 1 >= leftovers.size())
          throw config_error("missing value for override --" + key);
        value = leftovers[++i];
      }
      cfg.override_key(key, value);
    }

    const RunResult result = run_scenario(subcommand, cfg);
    const std::string dir = cfg.output_directory();
    const auto formats = cfg.output_formats();
    for (const auto& table : result.tables) {
      const auto paths = emit(table, formats, dir);
      for (const auto& path : paths)
        std::cout << "wrote " << path << " (" << table.rows().size() << " rows)\n";
    }
    std::cout << "done in " << result.seconds << " s\n";
    if (result.check_failed) {
      std::cerr << subcommand << ": checks FAILED\n";
      return exit_check_failed;
    }
    return exit_ok;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const condition_violation& e) {
    std::cerr << e.what() << "\n";
    return exit_condition;
  } catch (const budget_exceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return exit_budget;
  } catch (const io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return exit_io;
  } catch (const non_convergent& e) {
    std::cerr << "non-convergent: " << e.what() << "\n";
    return exit_nonconvergent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
}

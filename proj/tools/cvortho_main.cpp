// Copyright 2026 The cvortho Authors
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

#include <CLI11.hpp>

#include <iostream>

#include "cvortho/experiment.hpp"
#include "cvortho/serialization.hpp"
#include "cvortho/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cvortho: orthogonalizer and CV-qubit simulator"};
  app.require_subcommand(1);

  std::string run_path, validate_path, output_dir;
  std::uint64_t seed = 0;

  auto* run_cmd = app.add_subcommand("run", "Run the experiment in a config");
  run_cmd->add_option("config", run_path, "Config JSON")->required();
  auto* out_opt = run_cmd->add_option("--output-dir", output_dir,
                                      "Override output_dir");
  auto* seed_opt =
      run_cmd->add_option("--seed", seed, "Override sampling.seed");

  auto* validate_cmd =
      app.add_subcommand("validate", "Check a config without running it");
  validate_cmd->add_option("config", validate_path, "Config JSON")->required();

  auto* verify_cmd =
      app.add_subcommand("verify", "Run the built-in invariant battery");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) {
      const auto report = cvortho::validate_config_file(validate_path);
      std::cout << report.str();
      if (report.ok()) std::cout << '\n';
      return report.ok() ? 0 : 1;
    }
    if (*verify_cmd) {
      const auto rows = cvortho::run_verify_battery();
      cvortho::print_check_table(std::cout, rows);
      for (const auto& r : rows) {
        if (!r.passed) return 1;
      }
      return 0;
    }
    auto doc = cvortho::read_json_file(run_path);
    if (*out_opt && doc.is_object()) doc["output_dir"] = output_dir;
    if (*seed_opt && doc.is_object()) doc["sampling"]["seed"] = seed;
    const auto report = cvortho::validate_config(doc);
    if (!report.ok()) {
      std::cerr << "invalid config " << run_path << ":\n" << report.str();
      return 1;
    }
    const auto result = cvortho::run(cvortho::parse_config(doc));
    std::cout << result.report.dump(2) << '\n';
    std::cout << "manifest: "
              << (cvortho::parse_config(doc).output_dir / "manifest.json")
                     .string()
              << '\n';
    return result.passed ? 0 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

/*
 * Copyright 2026 The dbl Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Talks to the simulator only through the C API.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "dbl/dbl.h"

namespace {

int report_failure(dbl_status status) {
  std::fprintf(stderr, "error: %s\n", dbl_last_error());
  return static_cast<int>(status);
}

int cmd_run(const std::string& manifest, const std::string& out, unsigned parallelism) {
  std::size_t starved = 0;
  const dbl_status st = dbl_run_grid(manifest.c_str(), out.c_str(), parallelism, &starved);
  if (st == DBL_OK) {
    std::printf("wrote results to %s\n", out.c_str());
    return 0;
  }
  if (st == DBL_ERR_STARVATION) {
    std::fprintf(stderr, "warning: %s (see runs.csv); results written to %s\n", dbl_last_error(),
                 out.c_str());
    return static_cast<int>(st);
  }
  return report_failure(st);
}

int cmd_check(const std::string& path) {
  dbl_scenario* scenario = nullptr;
  if (dbl_status st = dbl_scenario_load(path.c_str(), &scenario); st != DBL_OK)
    return report_failure(st);
  char* text = nullptr;
  int all_pass = 0;
  const dbl_status st = dbl_check_assumptions(scenario, &text, &all_pass);
  dbl_scenario_free(scenario);
  if (st != DBL_OK) return report_failure(st);
  std::fputs(text, stdout);
  dbl_string_free(text);
  return 0;
}

int cmd_bounds(const std::string& report, std::uint64_t seed, std::size_t trials, unsigned workers) {
  int all_pass = 0;
  if (dbl_status st = dbl_bounds_report(report.c_str(), seed, trials, workers, &all_pass); st != DBL_OK)
    return report_failure(st);
  std::printf("bound verification %s; report written to %s\n", all_pass ? "passed" : "FAILED",
              report.c_str());
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed-reward contextual bandit simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dbl_version());

  std::string manifest, out_dir, scenario, report;
  unsigned parallelism = 1;
  unsigned workers = 1;
  std::uint64_t seed = 20240601;
  std::size_t trials = 2000;

  auto* run = app.add_subcommand("run", "Run every scenario in a manifest and write CSV outputs");
  run->add_option("--manifest", manifest, "File listing scenario paths, one per line")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--parallelism", parallelism, "Concurrent replications")
      ->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "Evaluate the modelling assumptions for a scenario");
  check->add_option("--scenario", scenario, "Scenario file")->required();

  auto* bounds = app.add_subcommand("bounds", "Monte-Carlo verification of the tail bounds");
  bounds->add_option("--report", report, "CSV report path")->required();
  bounds->add_option("--seed", seed, "Master seed for the experiments");
  bounds->add_option("--trials", trials, "Trials per experiment (>= 2000)");
  bounds->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(DBL_ERR_VALIDATION);
  }

  if (*run) return cmd_run(manifest, out_dir, parallelism);
  if (*check) return cmd_check(scenario);
  return cmd_bounds(report, seed, trials, workers);
}

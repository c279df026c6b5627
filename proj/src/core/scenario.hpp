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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "core/delays.hpp"
#include "core/simulator.hpp"

namespace dbl {

// A full experiment: the simulation configuration plus replication and
// output settings. One scenario per file.
struct Scenario {
  std::string name;
  std::size_t ell = 0;
  std::size_t d = 0;
  std::string reward_preset;
  SimulationConfig sim;
  std::uint64_t replications = 20;
  std::uint64_t master_seed = 0;
  std::uint64_t trace_thinning = 10;
  DelayDiagnostics growth;  // alpha, beta, c_lower used by the assumption checks
};

// Parses and validates scenario text (JSON). `origin` names the source in
// error messages. Throws ParseError (with line and column) or ValidationError
// (naming the field).
Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>");

// Reads a scenario file. When DBL_SEED is set in the environment it replaces
// master_seed. A missing "name" defaults to the file stem.
Scenario load_scenario(const std::filesystem::path& path);

// One scenario path per line, relative to the manifest's directory. Blank
// lines and lines starting with '#' are skipped.
std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& manifest);

std::vector<Scenario> load_manifest(const std::filesystem::path& manifest);

}  // namespace dbl

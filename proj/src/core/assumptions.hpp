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

#include <string>
#include <vector>

#include "core/scenario.hpp"

namespace dbl {

struct AssumptionCheck {
  std::string id;  // A2..A6, T2
  bool pass = false;
  std::string detail;
};

struct AssumptionReport {
  std::string scenario;
  std::vector<AssumptionCheck> checks;

  bool all_pass() const;
  const AssumptionCheck* find(const std::string& id) const;
  std::string to_text() const;
};

// Evaluates every modelling assumption for a scenario. Failed checks are
// reported, never thrown.
AssumptionReport check_assumptions(const Scenario& scenario);

}  // namespace dbl

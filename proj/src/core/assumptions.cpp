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

#include "core/assumptions.hpp"

#include <sstream>

#include "core/bounds.hpp"
#include "core/environment.hpp"

namespace dbl {

bool AssumptionReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const AssumptionCheck* AssumptionReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string AssumptionReport::to_text() const {
  std::ostringstream os;
  os << "scenario " << scenario << "\n";
  for (const auto& c : checks) os << c.id << ' ' << (c.pass ? "PASS" : "FAIL") << "  " << c.detail << "\n";
  os << "overall " << (all_pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

AssumptionReport check_assumptions(const Scenario& s) {
  AssumptionReport report;
  report.scenario = s.name;
  const auto& sim = s.sim;

  {
    Stream rng(s.master_seed, 0, static_cast<std::uint64_t>(Substream::kDiagnostics));
    const auto diag = diagnose_reward_set(sim.rewards, rng);
    std::ostringstream os;
    os << "min f on grid=" << diag.min_value << " A=" << diag.sup_gap
       << " E f*(X)~" << diag.mean_optimal;
    report.checks.push_back({"A2", diag.nonnegative && diag.sup_gap_finite && diag.mean_optimal > 0.0,
                             os.str()});
  }
  report.checks.push_back({"A3", true, "uniform design: c_lower = c_upper = 1"});
  {
    std::ostringstream os;
    os << "gaussian sd=" << sim.noise.sd << " v=" << sim.noise.bernstein_v
       << " c=" << sim.noise.bernstein_c << " checked for m=2..8";
    report.checks.push_back({"A4", bernstein_condition_holds(sim.noise), os.str()});
  }
  report.checks.push_back({"A5", true, "delays are sampled without covariates or arms"});
  {
    const auto growth = check_growth(sim.delay, s.growth);
    std::ostringstream os;
    os << sim.delay.describe() << " alpha=" << s.growth.alpha << " beta=" << s.growth.beta
       << " min ratio=" << growth.min_ratio << " c_lower=" << s.growth.c_lower;
    report.checks.push_back({"A6", growth.holds, os.str()});
  }
  {
    const auto cond = theorem2_condition(sim.schedule, s.d, s.growth.alpha, s.growth.beta,
                                         log_grid(100, 1000000, 25));
    std::ostringstream os;
    os << "pi=" << sim.schedule.pi.describe() << " h=" << sim.schedule.h.describe()
       << " eventually increasing=" << (cond.eventually_increasing ? "yes" : "no")
       << " value at 1e6=" << cond.final_value;
    report.checks.push_back({"T2", cond.holds(), os.str()});
  }
  return report;
}

}  // namespace dbl

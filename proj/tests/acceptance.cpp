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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "core/bounds.hpp"
#include "core/estimator.hpp"
#include "core/grid.hpp"
#include "core/policy.hpp"
#include "core/scenario.hpp"
#include "core/simulator.hpp"

using namespace dbl;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = DBL_SCENARIO_DIR;

// Mean R_n at the horizon must exceed this for the no-delay consistency run.
constexpr double kMinMeanRatio = 0.9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// ---- 1: estimator against a brute-force raw-store mean ----------------------

std::size_t cell_of(const CovariatePoint& x, std::size_t m) {
  std::size_t id = 0, stride = 1;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    std::size_t i = 0;
    while (i + 1 < m && x[k] >= static_cast<double>(i + 1) / static_cast<double>(m)) ++i;
    id += i * stride;
    stride *= m;
  }
  return id;
}

Outcome estimator_oracle() {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z(0.0, 1.0);
  const std::size_t ms[] = {1, 2, 4, 5};
  HistogramEstimator est(3, Partition(2, 2));
  std::size_t checked = 0, bad = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t arm = 1 + gen() % 3;
    est.ingest(arm, {u(gen), u(gen)}, z(gen));
    if (i % 20 == 19) est.rebin(Partition(ms[(i / 20) % 4], 2));
    if (i % 10 != 9) continue;
    const std::size_t m = est.partition().m_per_axis();
    for (std::size_t a = 1; a <= 3; ++a) {
      std::vector<std::size_t> count(m * m, 0);
      std::vector<double> sum(m * m, 0.0);
      for (const auto& obs : est.raw(a)) {
        const std::size_t c = cell_of(obs.x, m);
        ++count[c];
        sum[c] += obs.y;
      }
      for (std::size_t c = 0; c < m * m; ++c) {
        if (est.aggregates(a)[c].count != count[c]) ++bad;
        if (count[c] == 0) continue;
        // query the cube centre
        const CovariatePoint q{((c % m) + 0.5) / static_cast<double>(m),
                               ((c / m) + 0.5) / static_cast<double>(m)};
        const double want = sum[c] / static_cast<double>(count[c]);
        const double got = est.estimate(a, q);
        if (std::abs(got - want) > 1e-12 * std::max(1.0, std::abs(want))) ++bad;
        ++checked;
      }
    }
  }
  return {bad == 0 && checked > 0, "bins checked=" + std::to_string(checked) + " mismatches=" + std::to_string(bad)};
}

// ---- 2: selection frequencies ------------------------------------------------

Outcome policy_distribution() {
  constexpr std::size_t draws = 100000;
  double worst = 0.0;
  for (double pi : {0.05, 0.1, 1.0 / 3.0}) {
    for (std::size_t greedy = 1; greedy <= 3; ++greedy) {
      Stream rng(7 + greedy);
      std::array<std::size_t, 4> c{};
      for (std::size_t i = 0; i < draws; ++i) ++c[select_arm(greedy, pi, 3, rng)];
      for (std::size_t arm = 1; arm <= 3; ++arm) {
        const double p = arm == greedy ? 1.0 - 2.0 * pi : pi;
        const double se = std::sqrt(p * (1.0 - p) / draws);
        worst = std::max(worst, std::abs(c[arm] / double(draws) - p) / se);
      }
    }
  }
  return {worst <= 4.0, "max |z|=" + fmt(worst)};
}

// ---- 3: delivery audit -------------------------------------------------------

Outcome delivery_audit() {
  const auto grid = load_manifest(kScenarios / "study_grid.txt");
  constexpr std::uint64_t horizon = 1000;
  std::size_t runs = 0, violations = 0, delivered = 0;
  for (const auto& s : grid) {
    SimulationConfig c = s.sim;
    c.horizon = horizon;
    c.delay = c.delay.with_horizon(horizon);
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
      Simulation sim(c, s.master_seed, rep);
      while (!sim.finished()) {
        const auto row = sim.step();
        if (row.observed + row.pending + row.never != row.n) ++violations;
      }
      if (sim.starved()) ++violations;
      for (const auto& rec : sim.issues()) {
        if (!rec.delay) {
          if (rec.deliveries != 0) ++violations;
          continue;
        }
        const std::uint64_t arrival = rec.issue_round + *rec.delay;
        if (arrival <= horizon) {
          if (rec.deliveries != 1 || rec.delivered_round != arrival) ++violations;
          ++delivered;
        } else if (rec.deliveries != 0) {
          ++violations;
        }
      }
      ++runs;
    }
  }
  return {violations == 0 && runs == 60,
          "runs=" + std::to_string(runs) + " deliveries=" + std::to_string(delivered) +
              " violations=" + std::to_string(violations)};
}

// ---- 4 and 5: regret at the horizon -----------------------------------------

struct RegretStats {
  double r_early = 0.0;  // mean r_n at n = 1000
  double r_final = 0.0;  // mean r_n at the horizon
  double R_final = 0.0;
};

RegretStats regret_stats(const Scenario& s, std::uint64_t reps) {
  RegretStats out;
  for (std::uint64_t rep = 0; rep < reps; ++rep) {
    const auto r = run(s.sim, s.master_seed, rep);
    out.r_early += r.trace.at(999).per_round_regret;
    out.r_final += r.trace.back().per_round_regret;
    out.R_final += r.trace.back().ratio_Rn;
  }
  const double k = static_cast<double>(reps);
  out.r_early /= k;
  out.r_final /= k;
  out.R_final /= k;
  return out;
}

Outcome consistency_trend() {
  const auto s = load_scenario(kScenarios / "study_nodelay_pi14_hlog.scn");
  const auto st = regret_stats(s, 20);
  return {st.r_final < st.r_early && st.R_final > kMinMeanRatio,
          "mean r(1e3)=" + fmt(st.r_early) + " mean r(1e4)=" + fmt(st.r_final) +
              " mean R(1e4)=" + fmt(st.R_final)};
}

Outcome delay_ordering() {
  std::vector<double> finals;
  std::string detail;
  for (const char* tag : {"nodelay", "delay1", "delay2", "delay3", "delay4"}) {
    const auto s = load_scenario(kScenarios / ("study_" + std::string(tag) + "_pi14_hlog.scn"));
    finals.push_back(regret_stats(s, 20).r_final);
    detail += std::string(tag) + "=" + fmt(finals.back()) + " ";
  }
  const bool d4 = finals[4] > finals[0];
  const bool d1 = std::abs(finals[1] - finals[0]) <= 0.25 * finals[0];
  return {d4 && d1, detail + (d4 ? "" : "[delay4 not above nodelay] ") + (d1 ? "" : "[delay1 off by >25%]")};
}

// ---- 6: tail experiments -----------------------------------------------------

Outcome tail_bounds() {
  const auto checks = run_tail_checks(20240601, kMinTailTrials, 1);
  bool all = checks.size() == 4;
  std::string detail;
  for (const auto& c : checks) {
    all = all && c.pass && c.trials >= kMinTailTrials;
    detail += c.name + " emp=" + fmt(c.empirical) + " bound=" + fmt(c.bound) + " sigma=" + fmt(c.mc_sigma) + "; ";
  }
  return {all, detail};
}

// ---- 7: growth condition classifier ------------------------------------------

Outcome condition_classifier() {
  const auto grid = log_grid(100, 1000000, 25);
  const auto a = theorem2_condition({DecayRule::power(0.25), DecayRule::loginv()}, 2, 1.0, 0.0, grid);
  const auto b = theorem2_condition({DecayRule::power(0.5), DecayRule::power(0.5)}, 2, 1.0, 0.0, grid);
  const auto c =
      theorem2_condition({DecayRule::logpower(0.25), DecayRule::logpower(0.125)}, 2, 0.0, 2.0, grid);
  return {a.holds() && !b.holds() && c.holds(),
          std::string("quarter-power/log=") + (a.holds() ? "holds" : "fails") +
              " half-power=" + (b.holds() ? "holds" : "fails") + " log-case=" + (c.holds() ? "holds" : "fails")};
}

// ---- 8: determinism across parallelism ---------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome grid_determinism() {
  const auto grid = load_manifest(kScenarios / "study_grid.txt");
  const fs::path root = fs::temp_directory_path() / ("dbl_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  run_grid(grid, root / "p1", 1);
  run_grid(grid, root / "p8", 8);
  std::size_t same = 0;
  for (const auto& s : grid) {
    const auto a = slurp(root / "p1" / s.name / "summary.csv");
    if (!a.empty() && a == slurp(root / "p8" / s.name / "summary.csv")) ++same;
  }
  fs::remove_all(root);
  return {same == grid.size(), "identical summaries=" + std::to_string(same) + "/" + std::to_string(grid.size())};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> all = {
      {1, "estimator oracle", estimator_oracle},
      {2, "selection frequencies", policy_distribution},
      {3, "delivery audit", delivery_audit},
      {4, "consistency trend", consistency_trend},
      {5, "delay ordering", delay_ordering},
      {6, "tail bounds", tail_bounds},
      {7, "growth condition", condition_classifier},
      {8, "grid determinism", grid_determinism},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d %-22s %s  (%.2fs)  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}

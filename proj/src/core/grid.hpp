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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "core/bounds.hpp"
#include "core/scenario.hpp"
#include "core/simulator.hpp"

namespace dbl {

inline constexpr const char* kTraceHeader =
    "scenario,rep,n,arm,greedy_arm,opt_arm,inst_regret,per_round_regret,ratio_Rn,N_obs,pending,"
    "pi_n,m_per_axis";
inline constexpr const char* kSummaryHeader = "scenario,n,mean_r,min_r,max_r,mean_R,reps";
inline constexpr const char* kBoundsHeader = "bound_name,params,empirical,bound,mc_sigma,pass";

// Rounds kept by trace thinning: multiples of `thinning` plus the horizon.
bool keep_row(std::uint64_t n, std::uint64_t thinning, std::uint64_t horizon);

// Shortest round-trip decimal form.
std::string format_double(double v);

std::string trace_csv(const Scenario& scenario, std::uint64_t rep, const std::vector<TraceRow>& rows);

struct SummaryRow {
  std::uint64_t n = 0;
  double mean_r = 0.0;
  double min_r = 0.0;
  double max_r = 0.0;
  double mean_R = 0.0;
  std::uint64_t reps = 0;
};

// Aggregates thinned per-replication traces, in replication order.
std::vector<SummaryRow> summarize(const std::vector<std::vector<TraceRow>>& thinned_traces);
std::string summary_csv(const Scenario& scenario, const std::vector<SummaryRow>& rows);

struct ReplicationResult {
  std::vector<TraceRow> thinned;
  bool starved = false;
  std::uint64_t rounds = 0;
};

// Runs every replication of one scenario; results are indexed by replication.
std::vector<ReplicationResult> run_replications(const Scenario& scenario, std::size_t parallelism);

struct GridOutcome {
  std::size_t runs = 0;
  std::size_t starved_runs = 0;
};

// Layout under out_dir:  <scenario>/trace_rep<NNN>.csv, <scenario>/summary.csv,
// <scenario>/runs.csv (per-replication diagnostics). File contents depend only
// on the scenarios, never on `parallelism`.
GridOutcome run_grid(const std::vector<Scenario>& scenarios, const std::filesystem::path& out_dir,
                     std::size_t parallelism);

std::string bounds_csv(const std::vector<TailCheck>& checks);

// Runs the four tail experiments and writes the CSV report. Returns true when
// every experiment passes.
bool write_bounds_report(const std::filesystem::path& path, std::uint64_t seed,
                         std::size_t trials = kMinTailTrials, std::size_t workers = 1);

void write_text_file(const std::filesystem::path& path, const std::string& body);

}  // namespace dbl

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

#include "core/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace dbl {

bool keep_row(std::uint64_t n, std::uint64_t thinning, std::uint64_t horizon) {
  return n % thinning == 0 || n == horizon;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) throw InternalError("non-finite value in CSV output");
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw InternalError("double formatting failed");
  return std::string(buf, end);
}

std::string trace_csv(const Scenario& s, std::uint64_t rep, const std::vector<TraceRow>& rows) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += s.name;
    out += ',' + std::to_string(rep) + ',' + std::to_string(r.n) + ',' + std::to_string(r.arm) +
           ',' + std::to_string(r.greedy_arm) + ',' + std::to_string(r.opt_arm) + ',' +
           format_double(r.inst_regret) + ',' + format_double(r.per_round_regret) + ',' +
           format_double(r.ratio_Rn) + ',' + std::to_string(r.observed) + ',' +
           std::to_string(r.pending) + ',' + format_double(r.pi_n) + ',' +
           std::to_string(r.m_per_axis) + '\n';
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<std::vector<TraceRow>>& traces) {
  std::size_t longest = 0;
  for (const auto& t : traces) longest = std::max(longest, t.size());
  std::vector<SummaryRow> rows;
  for (std::size_t i = 0; i < longest; ++i) {
    SummaryRow row;
    double sum_r = 0.0, sum_R = 0.0;
    for (const auto& t : traces) {
      if (i >= t.size()) continue;
      const auto& tr = t[i];
      if (row.reps == 0) {
        row.n = tr.n;
        row.min_r = row.max_r = tr.per_round_regret;
      } else if (tr.n != row.n) {
        throw InternalError("thinned traces are misaligned");
      }
      row.min_r = std::min(row.min_r, tr.per_round_regret);
      row.max_r = std::max(row.max_r, tr.per_round_regret);
      sum_r += tr.per_round_regret;
      sum_R += tr.ratio_Rn;
      ++row.reps;
    }
    row.mean_r = sum_r / static_cast<double>(row.reps);
    row.mean_R = sum_R / static_cast<double>(row.reps);
    rows.push_back(row);
  }
  return rows;
}

std::string summary_csv(const Scenario& s, const std::vector<SummaryRow>& rows) {
  std::string out = kSummaryHeader;
  out += '\n';
  for (const auto& r : rows)
    out += s.name + ',' + std::to_string(r.n) + ',' + format_double(r.mean_r) + ',' +
           format_double(r.min_r) + ',' + format_double(r.max_r) + ',' + format_double(r.mean_R) +
           ',' + std::to_string(r.reps) + '\n';
  return out;
}

namespace {

ReplicationResult run_thinned(const Scenario& s, std::uint64_t rep) {
  Simulation sim(s.sim, s.master_seed, rep);
  ReplicationResult out;
  while (!sim.finished()) {
    TraceRow row = sim.step();
    if (keep_row(row.n, s.trace_thinning, s.sim.horizon)) out.thinned.push_back(row);
  }
  out.starved = sim.starved();
  out.rounds = sim.round();
  return out;
}

}  // namespace

std::vector<ReplicationResult> run_replications(const Scenario& s, std::size_t parallelism) {
  std::vector<ReplicationResult> results(s.replications);
  parallel_for(results.size(), parallelism,
               [&](std::size_t rep) { results[rep] = run_thinned(s, rep); });
  return results;
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

GridOutcome run_grid(const std::vector<Scenario>& scenarios, const std::filesystem::path& out_dir,
                     std::size_t parallelism) {
  if (scenarios.empty()) throw ValidationError("run_grid needs at least one scenario");

  struct Job {
    std::size_t scenario;
    std::uint64_t rep;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < scenarios.size(); ++i)
    for (std::uint64_t r = 0; r < scenarios[i].replications; ++r) jobs.push_back({i, r});

  std::vector<ReplicationResult> results(jobs.size());
  parallel_for(jobs.size(), parallelism, [&](std::size_t k) {
    results[k] = run_thinned(scenarios[jobs[k].scenario], jobs[k].rep);
  });

  // Single collector: every file is written here, in job order.
  GridOutcome outcome;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::size_t k = 0;
  for (const Scenario& s : scenarios) {
    const auto dir = out_dir / s.name;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::vector<TraceRow>> traces;
    std::string runs = "scenario,rep,rounds,starved\n";
    for (std::uint64_t rep = 0; rep < s.replications; ++rep, ++k) {
      auto& res = results[k];
      char name[32];
      std::snprintf(name, sizeof name, "trace_rep%03llu.csv", static_cast<unsigned long long>(rep));
      write_text_file(dir / name, trace_csv(s, rep, res.thinned));
      runs += s.name + ',' + std::to_string(rep) + ',' + std::to_string(res.rounds) + ',' +
              (res.starved ? "1" : "0") + '\n';
      ++outcome.runs;
      if (res.starved) ++outcome.starved_runs;
      traces.push_back(std::move(res.thinned));
    }
    write_text_file(dir / "summary.csv", summary_csv(s, summarize(traces)));
    write_text_file(dir / "runs.csv", runs);
  }
  return outcome;
}

std::string bounds_csv(const std::vector<TailCheck>& checks) {
  std::string out = kBoundsHeader;
  out += '\n';
  for (const auto& c : checks)
    out += c.name + ',' + c.params + ',' + format_double(c.empirical) + ',' +
           format_double(c.bound) + ',' + format_double(c.mc_sigma) + ',' +
           (c.pass ? "true" : "false") + '\n';
  return out;
}

bool write_bounds_report(const std::filesystem::path& path, std::uint64_t seed, std::size_t trials,
                         std::size_t workers) {
  const auto checks = run_tail_checks(seed, trials, workers);
  write_text_file(path, bounds_csv(checks));
  return std::all_of(checks.begin(), checks.end(), [](const TailCheck& c) { return c.pass; });
}

}  // namespace dbl

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
#include <queue>
#include <span>
#include <vector>

#include "core/delays.hpp"
#include "core/environment.hpp"
#include "core/estimator.hpp"
#include "core/policy.hpp"
#include "core/rng.hpp"

namespace dbl {

struct SimulationConfig {
  RewardFunctionSet rewards = RewardFunctionSet::constant({0.0, 1.0}, 1);
  GaussianNoise noise;
  DelayModel delay = DelayModel::none();
  Schedule schedule;
  InitPolicy init;
  std::uint64_t horizon = 10000;

  std::size_t arms() const { return rewards.arms(); }
  std::size_t dim() const { return rewards.dim(); }
  void validate() const;
};

// Initialization that waits for observations and is still running at this
// round (or at the horizon, if sooner) marks the run as starved.
inline constexpr std::uint64_t kStarvationRound = 10000;

struct PendingReward {
  std::uint64_t issue_round = 0;
  std::uint64_t arrival_round = 0;  // finite by construction; NEVER rewards are not queued
  std::size_t arm = 0;
  CovariatePoint x;
  double reward = 0.0;
};

struct TraceRow {
  std::uint64_t n = 0;
  std::size_t arm = 0;
  std::size_t greedy_arm = 0;
  std::size_t opt_arm = 0;
  double inst_regret = 0.0;
  double per_round_regret = 0.0;
  double ratio_Rn = 0.0;
  std::uint64_t observed = 0;  // N_n
  std::uint64_t pending = 0;   // finite-arrival rewards still in flight
  std::uint64_t never = 0;     // rewards that will never arrive
  double pi_n = 0.0;
  std::size_t m_per_axis = 0;
  bool forced = false;  // chosen by initialization
};

// One record per issued reward, for audits and brute-force metric checks.
struct IssueRecord {
  std::uint64_t issue_round = 0;
  std::size_t arm = 0;
  CovariatePoint x;
  Delay delay;
  std::uint64_t delivered_round = 0;  // 0 while undelivered
  std::uint32_t deliveries = 0;
};

class Simulation {
 public:
  Simulation(SimulationConfig config, std::uint64_t master_seed, std::uint64_t replication);

  // Plays one round: deliver due rewards, refresh the partition, observe a
  // covariate, choose an arm, issue its reward, record metrics.
  TraceRow step();

  std::uint64_t round() const { return round_; }
  bool init_done() const { return init_done_; }
  bool starved() const { return starved_; }
  // True once the run must not be stepped further.
  bool finished() const { return round_ >= config_.horizon || starved_; }

  std::uint64_t observed_count() const { return delivered_; }
  std::uint64_t pending_count() const { return queue_.size(); }
  std::uint64_t never_count() const { return never_; }

  const SimulationConfig& config() const { return config_; }
  const HistogramEstimator& estimator() const { return estimator_; }
  const std::vector<IssueRecord>& issues() const { return issues_; }

 private:
  struct LaterArrival {
    bool operator()(const PendingReward& a, const PendingReward& b) const {
      if (a.arrival_round != b.arrival_round) return a.arrival_round > b.arrival_round;
      return a.issue_round > b.issue_round;
    }
  };

  void deliver_due(std::uint64_t n);

  SimulationConfig config_;
  HistogramEstimator estimator_;
  Stream covariates_;
  Stream noise_;
  Stream delays_;
  Stream selection_;

  std::priority_queue<PendingReward, std::vector<PendingReward>, LaterArrival> queue_;
  std::vector<IssueRecord> issues_;
  std::vector<std::size_t> observed_per_arm_;
  std::vector<double> estimates_;

  std::uint64_t round_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t never_ = 0;
  bool init_done_ = false;
  bool starved_ = false;
  double sum_optimal_ = 0.0;
  double sum_achieved_ = 0.0;
};

struct RunResult {
  std::vector<TraceRow> trace;
  bool starved = false;
};

// Runs to the horizon (or until starvation aborts the run).
RunResult run(const SimulationConfig& config, std::uint64_t master_seed, std::uint64_t replication);

// Running-sum metrics stored in trace row n (1-based).
double ratio_Rn(std::span<const TraceRow> trace, std::uint64_t n);
double per_round_regret(std::span<const TraceRow> trace, std::uint64_t n);

}  // namespace dbl

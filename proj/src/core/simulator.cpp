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

#include "core/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace dbl {

void SimulationConfig::validate() const {
  if (rewards.arms() < 2) throw ValidationError("ell must be >= 2");
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  if (horizon < rewards.arms()) throw ValidationError("horizon must be >= ell");
  if (!(noise.sd >= 0.0) || !std::isfinite(noise.sd)) throw ValidationError("noise sd must be >= 0");
  if (noise.sd > 0.0 && !bernstein_condition_holds(noise))
    throw ValidationError("noise (v, c) pair violates the Bernstein moment condition");
  if (init.mode == InitMode::kFixedRounds && init.rounds < rewards.arms())
    throw ValidationError("init.r must be >= ell for fixed_rounds");
  auto check_rule = [](const DecayRule& r, const char* name) {
    if (!(r.exponent > 0.0) || !std::isfinite(r.exponent))
      throw ValidationError(std::string(name) + " exponent must be > 0");
  };
  check_rule(schedule.pi, "pi");
  check_rule(schedule.h, "h");
}

Simulation::Simulation(SimulationConfig config, std::uint64_t master_seed,
                       std::uint64_t replication)
    : config_(std::move(config)),
      estimator_(config_.arms(), Partition(snapped_m(config_.schedule, 1), config_.dim())),
      covariates_(master_seed, replication, static_cast<std::uint64_t>(Substream::kCovariates)),
      noise_(master_seed, replication, static_cast<std::uint64_t>(Substream::kNoise)),
      delays_(master_seed, replication, static_cast<std::uint64_t>(Substream::kDelays)),
      selection_(master_seed, replication, static_cast<std::uint64_t>(Substream::kSelection)),
      observed_per_arm_(config_.arms(), 0),
      estimates_(config_.arms(), 0.0) {
  config_.validate();
  issues_.reserve(config_.horizon);
}

void Simulation::deliver_due(std::uint64_t n) {
  while (!queue_.empty() && queue_.top().arrival_round <= n) {
    const PendingReward& r = queue_.top();
    estimator_.ingest(r.arm, r.x, r.reward);
    ++observed_per_arm_[r.arm - 1];
    ++delivered_;
    auto& rec = issues_[r.issue_round - 1];
    rec.delivered_round = n;
    ++rec.deliveries;
    queue_.pop();
  }
}

TraceRow Simulation::step() {
  if (finished()) throw ArgumentError("simulation already finished");
  const std::uint64_t n = ++round_;
  const std::size_t ell = config_.arms();

  deliver_due(n);

  const std::size_t m = snapped_m(config_.schedule, n);
  if (m != estimator_.partition().m_per_axis()) estimator_.rebin(Partition(m, config_.dim()));

  const CovariatePoint x = sample_covariate(covariates_, config_.dim());
  for (std::size_t i = 1; i <= ell; ++i) estimates_[i - 1] = estimator_.estimate(i, x);
  const std::size_t greedy = dbl::greedy_arm(estimates_);
  const double pi = pi_at(config_.schedule, n, ell);

  std::size_t arm = 0;
  bool forced = false;
  if (!init_done_) {
    if (auto a = init_arm(config_.init, n, observed_per_arm_, ell)) {
      arm = *a;
      forced = true;
    } else {
      init_done_ = true;
    }
  }
  if (!forced) arm = select_arm(greedy, pi, ell, selection_);

  const double y = sample_reward(config_.rewards, config_.noise, arm, x, noise_);
  const Delay delay = sample_delay(config_.delay, n, delays_);
  issues_.push_back({n, arm, x, delay, 0, 0});
  if (delay) {
    queue_.push({n, n + *delay, arm, x, y});
  } else {
    ++never_;
  }
  // A zero-delay reward is observed within its own round.
  deliver_due(n);

  const std::size_t best = optimal_arm(config_.rewards, x);
  const double f_best = mean_reward(config_.rewards, best, x);
  const double f_arm = mean_reward(config_.rewards, arm, x);
  sum_optimal_ += f_best;
  sum_achieved_ += f_arm;

  TraceRow row;
  row.n = n;
  row.arm = arm;
  row.greedy_arm = greedy;
  row.opt_arm = best;
  row.inst_regret = f_best - f_arm;
  row.per_round_regret = (sum_optimal_ - sum_achieved_) / static_cast<double>(n);
  row.ratio_Rn = sum_optimal_ > 0.0 ? sum_achieved_ / sum_optimal_ : 1.0;
  row.observed = delivered_;
  row.pending = queue_.size();
  row.never = never_;
  row.pi_n = pi;
  row.m_per_axis = estimator_.partition().m_per_axis();
  row.forced = forced;

  if (!init_done_ && config_.init.waits_for_observations() &&
      n >= std::min(config_.horizon, kStarvationRound)) {
    // Forced allocation only ends once every arm has an observation.
    const bool all = std::all_of(observed_per_arm_.begin(), observed_per_arm_.end(),
                                 [](std::size_t c) { return c > 0; });
    if (!all) starved_ = true;
  }
  return row;
}

RunResult run(const SimulationConfig& config, std::uint64_t master_seed,
              std::uint64_t replication) {
  config.validate();
  Simulation sim(config, master_seed, replication);
  RunResult result;
  result.trace.reserve(config.horizon);
  while (!sim.finished()) result.trace.push_back(sim.step());
  result.starved = sim.starved();
  return result;
}

double ratio_Rn(std::span<const TraceRow> trace, std::uint64_t n) {
  if (n < 1 || n > trace.size()) throw ArgumentError("round out of range");
  return trace[n - 1].ratio_Rn;
}

double per_round_regret(std::span<const TraceRow> trace, std::uint64_t n) {
  if (n < 1 || n > trace.size()) throw ArgumentError("round out of range");
  return trace[n - 1].per_round_regret;
}

}  // namespace dbl

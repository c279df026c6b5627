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

#include "core/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/environment.hpp"
#include "core/errors.hpp"
#include "core/estimator.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace dbl {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError(std::string(what) + " must be > 0");
}

// Fraction of trials for which event(trial) holds; each trial owns a stream.
template <class Event>
double tail_frequency(std::uint64_t seed, std::uint64_t tag, std::size_t trials,
                      std::size_t workers, Event&& event) {
  std::vector<char> hit(trials, 0);
  parallel_for(trials, workers, [&](std::size_t t) {
    Stream rng(seed, t, tag);
    hit[t] = event(rng) ? 1 : 0;
  });
  std::size_t hits = 0;
  for (char h : hit) hits += static_cast<std::size_t>(h);
  return static_cast<double>(hits) / static_cast<double>(trials);
}

TailCheck finish(std::string name, std::string params, double empirical, double bound,
                 std::size_t trials) {
  TailCheck c;
  c.name = std::move(name);
  c.params = std::move(params);
  c.empirical = empirical;
  c.bound = bound;
  c.trials = trials;
  c.mc_sigma = std::sqrt(empirical * (1.0 - empirical) / static_cast<double>(trials));
  c.pass = empirical <= bound + 3.0 * c.mc_sigma;
  return c;
}

void require_trials(std::size_t trials) {
  if (trials < kMinTailTrials)
    throw ArgumentError("tail experiments need at least " + std::to_string(kMinTailTrials) +
                        " trials");
}

}  // namespace

double obs_count_tail_bound(const BoundInputs& bi) {
  require_positive(bi.c_lower, "c_lower");
  require_positive(bi.h, "h");
  if (bi.partial_sum < 0.0) throw ArgumentError("partial_sum must be >= 0");
  const double hd = std::pow(bi.h, static_cast<double>(bi.d));
  return std::exp(-3.0 * bi.c_lower * hd * bi.partial_sum / 28.0);
}

double lemma1_bound(const BoundInputs& bi) {
  if (!(bi.epsilon > bi.w))
    throw ArgumentError("lemma bound needs epsilon > w(h; f)");
  if (bi.w < 0.0) throw ArgumentError("modulus of continuity must be >= 0");
  require_positive(bi.pi, "pi");
  require_positive(bi.v, "v");
  require_positive(bi.c, "c");
  if (bi.cubes < 1) throw ArgumentError("cube count must be >= 1");
  const double cubes = static_cast<double>(bi.cubes);
  const double nb = static_cast<double>(bi.min_cube_count);
  const double gap = bi.epsilon - bi.w;
  const double selection = cubes * std::exp(-3.0 * bi.pi * nb / 28.0);
  const double noise =
      2.0 * cubes *
      std::exp(-nb * bi.pi * bi.pi * gap * gap / (8.0 * (bi.v * bi.v + bi.c * (bi.pi / 2.0) * gap)));
  return selection + noise;
}

double bernoulli_sum_bound(double beta_sum) {
  if (beta_sum < 0.0 || std::isnan(beta_sum)) throw ArgumentError("beta_sum must be >= 0");
  return std::exp(-3.0 * beta_sum / 28.0);
}

double weighted_noise_sum_bound(std::uint64_t n, double epsilon, double v, double c) {
  if (epsilon < 0.0 || std::isnan(epsilon)) throw ArgumentError("epsilon must be >= 0");
  require_positive(v, "v");
  require_positive(c, "c");
  const double nn = static_cast<double>(n);
  return std::exp(-nn * epsilon * epsilon / (v * v + c * epsilon));
}

std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points) {
  if (lo < 2 || hi <= lo || points < 2) throw ArgumentError("log_grid needs 2 <= lo < hi");
  std::vector<std::uint64_t> grid;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < points; ++i) {
    const double x = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    const auto v = static_cast<std::uint64_t>(std::llround(x));
    if (grid.empty() || v > grid.back()) grid.push_back(v);
  }
  grid.back() = hi;
  return grid;
}

namespace {

bool increasing_tail(const std::vector<double>& v) {
  if (v.size() < 2) return false;
  const std::size_t start = v.size() - std::max<std::size_t>(2, v.size() / 3);
  for (std::size_t i = start + 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

}  // namespace

ConditionReport theorem2_condition(const Schedule& schedule, std::size_t d, double alpha,
                                   double beta, const std::vector<std::uint64_t>& n_grid,
                                   const std::optional<DelayModel>& delay) {
  if (!((alpha > 0.0) || (alpha == 0.0 && beta > 1.0)))
    throw ArgumentError("growth rate needs alpha > 0, or alpha = 0 and beta > 1");
  if (n_grid.size() < 3) throw ArgumentError("condition grid needs at least 3 points");
  ConditionReport report;
  report.grid = n_grid;
  const double dd = static_cast<double>(d);
  for (std::uint64_t n : n_grid) {
    if (n < 3) throw ArgumentError("condition grid points must be >= 3");
    const double x = static_cast<double>(n);
    const double logn = std::log(x);
    const double pi = schedule.pi.raw(n);
    const double hd = std::pow(schedule.h.raw(n), dd);
    report.values.push_back(std::pow(x, alpha) * std::pow(logn, beta - 1.0) * hd * pi * pi);
    if (delay) report.summability_values.push_back(hd * pi * pi * partial_sum(*delay, n) / logn);
  }
  report.eventually_increasing = increasing_tail(report.values);
  report.final_value = report.values.back();
  if (delay) {
    report.summability_increasing = increasing_tail(report.summability_values);
    report.summability_final = report.summability_values.back();
  }
  return report;
}

TailCheck mc_observation_count(std::uint64_t seed, std::size_t trials, std::size_t workers) {
  require_trials(trials);
  constexpr std::uint64_t n = 500;
  constexpr std::size_t d = 2;
  const Partition partition(2, d);
  BoundInputs bi;
  bi.n = n;
  bi.h = partition.h();
  bi.d = d;
  bi.c_lower = 1.0;
  bi.partial_sum = partial_sum(DelayModel::none(), n);
  const double threshold = bi.c_lower * std::pow(bi.h, 2.0) * bi.partial_sum / 2.0;

  const double freq = tail_frequency(seed, 11, trials, workers, [&](Stream& rng) {
    std::uint64_t in_cube = 0;
    for (std::uint64_t j = 0; j < n; ++j)
      if (partition.bin_index(sample_covariate(rng, d)) == 0) ++in_cube;
    return static_cast<double>(in_cube) <= threshold;
  });
  return finish("obs_count_tail", "n=500;m=2;d=2;delay=none;c_lower=1", freq,
                obs_count_tail_bound(bi), trials);
}

TailCheck mc_histogram_sup_error(std::uint64_t seed, std::size_t trials, std::size_t workers) {
  require_trials(trials);
  constexpr std::size_t d = 2;
  constexpr std::size_t n = 8000;
  constexpr std::size_t m = 4;
  constexpr std::size_t grid = 41;
  constexpr double pi = 0.5;
  constexpr double sd = 0.5;
  constexpr double margin = 0.3;
  const MeanFunction f = [](const CovariatePoint& x) { return 0.7 * (x[0] + x[1]); };
  const Partition partition(m, d);

  // One design shared by every trial: the bound is conditional on it.
  Stream design_rng(seed, 0, 12);
  std::vector<CovariatePoint> design;
  std::vector<std::uint64_t> per_cube(partition.cubes(), 0);
  for (std::size_t j = 0; j < n; ++j) {
    design.push_back(sample_covariate(design_rng, d));
    ++per_cube[partition.bin_index(design.back())];
  }

  // The grid estimate of w can undershoot by at most the variation across one
  // grid step, so that amount is added before forming eps - w.
  const double w_grid = modulus_of_continuity(f, d, partition.h(), grid);
  const double w_slack = modulus_of_continuity(f, d, 1.0 / static_cast<double>(grid - 1), grid);
  BoundInputs bi;
  bi.n = n;
  bi.h = partition.h();
  bi.d = d;
  bi.pi = pi;
  bi.v = sd;
  bi.c = sd;
  bi.w = w_grid + w_slack;
  bi.epsilon = bi.w + margin;
  bi.cubes = partition.cubes();
  bi.min_cube_count = *std::min_element(per_cube.begin(), per_cube.end());

  const auto points = sup_error_points(partition, grid);
  const double freq = tail_frequency(seed, 13, trials, workers, [&](Stream& rng) {
    HistogramEstimator est(1, partition);
    for (const auto& x : design) {
      if (rng.uniform() >= pi) continue;
      est.ingest(1, x, f(x) + sd * rng.normal());
    }
    // An empty cube leaves the estimator undefined there: count it as a miss.
    for (const auto& agg : est.aggregates(1))
      if (agg.count == 0) return true;
    double worst = 0.0;
    for (const auto& x : points) worst = std::max(worst, std::abs(est.estimate(1, x) - f(x)));
    return worst >= bi.epsilon;
  });

  std::ostringstream params;
  params << "n=8000;m=4;d=2;pi=0.5;sd=0.5;w=" << bi.w << ";eps=" << bi.epsilon
         << ";min_Nb=" << bi.min_cube_count;
  return finish("lemma1_sup_error", params.str(), freq, lemma1_bound(bi), trials);
}

TailCheck mc_bernoulli_sum(std::uint64_t seed, std::size_t trials, std::size_t workers) {
  require_trials(trials);
  constexpr std::size_t n = 200;
  constexpr double p = 0.3;
  const double beta_sum = p * n;
  const double freq = tail_frequency(seed, 14, trials, workers, [&](Stream& rng) {
    std::size_t s = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (rng.uniform() < p) ++s;
    return static_cast<double>(s) <= beta_sum / 2.0;
  });
  return finish("bernoulli_sum", "n=200;p=0.3", freq, bernoulli_sum_bound(beta_sum), trials);
}

TailCheck mc_weighted_noise_sum(std::uint64_t seed, std::size_t trials, std::size_t workers) {
  require_trials(trials);
  constexpr std::uint64_t n = 200;
  constexpr double eps = 0.15;
  const GaussianNoise noise = GaussianNoise::with_sd(0.5);
  const double freq = tail_frequency(seed, 15, trials, workers, [&](Stream& rng) {
    double s = 0.0;
    for (std::uint64_t j = 0; j < n; ++j) s += noise.sd * rng.normal();
    return s >= static_cast<double>(n) * eps;
  });
  return finish("weighted_noise_sum", "n=200;eps=0.15;sd=0.5;v=0.5;c=0.5", freq,
                weighted_noise_sum_bound(n, eps, noise.bernstein_v, noise.bernstein_c), trials);
}

std::vector<TailCheck> run_tail_checks(std::uint64_t seed, std::size_t trials,
                                       std::size_t workers) {
  return {mc_observation_count(seed, trials, workers), mc_histogram_sup_error(seed, trials, workers),
          mc_bernoulli_sum(seed, trials, workers), mc_weighted_noise_sum(seed, trials, workers)};
}

}  // namespace dbl

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
#include <optional>
#include <string>
#include <vector>

#include "core/delays.hpp"
#include "core/policy.hpp"

namespace dbl {

struct BoundInputs {
  std::uint64_t n = 1;
  double h = 1.0;
  std::size_t d = 1;
  double pi = 1.0;
  double c_lower = 1.0;
  double c_upper = 1.0;  // recorded only
  double partial_sum = 0.0;
  double v = 0.5;
  double c = 0.5;
  double epsilon = 1.0;
  double w = 0.0;
  std::size_t cubes = 1;
  std::uint64_t min_cube_count = 0;
};

// Bound on P(N <= c h^d S / 2) with S = sum_j G_j(n-j):  exp(-3 c h^d S / 28).
double obs_count_tail_bound(const BoundInputs& bi);

// Conditional bound on P(||f_hat - f||_inf >= eps) for the histogram estimator.
// Throws ArgumentError unless epsilon > w.
double lemma1_bound(const BoundInputs& bi);

// exp(-3 B / 28) bounding P(sum W_j <= B / 2) when P(W_j = 1 | past) >= beta_j, B = sum beta_j.
double bernoulli_sum_bound(double beta_sum);

// exp(-n eps^2 / (v^2 + c eps)) bounding P(sum I_j eps_j >= n eps).
double weighted_noise_sum_bound(std::uint64_t n, double epsilon, double v, double c);

// Values above 1 carry no information; they are reported, never clamped.
inline bool is_vacuous(double bound) { return bound >= 1.0; }

struct ConditionReport {
  std::vector<std::uint64_t> grid;
  std::vector<double> values;  // n^alpha (log n)^(beta-1) h_n^d pi_n^2
  bool eventually_increasing = false;
  double final_value = 0.0;
  // h_n^d pi_n^2 sum_j G_j(n-j) / log n, when a delay model is supplied.
  std::vector<double> summability_values;
  bool summability_increasing = false;
  double summability_final = 0.0;

  bool holds() const { return eventually_increasing; }
};

// Log-spaced integer grid on [lo, hi].
std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points);

// Evaluates the bandwidth/exploration growth condition with the unclamped
// schedule rules. "Eventually increasing" means strictly increasing over the
// last third of the grid.
ConditionReport theorem2_condition(const Schedule& schedule, std::size_t d, double alpha,
                                   double beta, const std::vector<std::uint64_t>& n_grid,
                                   const std::optional<DelayModel>& delay = std::nullopt);

// ---- Monte-Carlo tail experiments -----------------------------------------

struct TailCheck {
  std::string name;
  std::string params;
  double empirical = 0.0;
  double bound = 0.0;
  double mc_sigma = 0.0;
  std::size_t trials = 0;
  bool pass = false;
};

inline constexpr std::size_t kMinTailTrials = 2000;

// N_b for one fixed cube: uniform covariates, no delay, n = 500, m = 2, d = 2.
TailCheck mc_observation_count(std::uint64_t seed, std::size_t trials = kMinTailTrials,
                               std::size_t workers = 1);
// Fixed design, f(x) = 0.7 (x1 + x2), sd = 0.5, arm chosen w.p. pi at every point.
TailCheck mc_histogram_sup_error(std::uint64_t seed, std::size_t trials = kMinTailTrials,
                                 std::size_t workers = 1);
// 200 independent Bernoulli(0.3).
TailCheck mc_bernoulli_sum(std::uint64_t seed, std::size_t trials = kMinTailTrials,
                           std::size_t workers = 1);
// N(0, 0.25) noise, all I_j = 1, n = 200, eps = 0.15.
TailCheck mc_weighted_noise_sum(std::uint64_t seed, std::size_t trials = kMinTailTrials,
                                std::size_t workers = 1);

std::vector<TailCheck> run_tail_checks(std::uint64_t seed, std::size_t trials = kMinTailTrials,
                                       std::size_t workers = 1);

}  // namespace dbl

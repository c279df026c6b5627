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

#include <array>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace dbl {

inline constexpr std::size_t kMaxDim = 4;

// A point in [0,1]^d, d <= kMaxDim. Stored inline so the simulator hot loop
// never allocates.
class CovariatePoint {
 public:
  CovariatePoint() = default;
  explicit CovariatePoint(std::size_t d);
  CovariatePoint(std::initializer_list<double> coords);
  explicit CovariatePoint(std::span<const double> coords);

  std::size_t dim() const { return dim_; }
  double operator[](std::size_t k) const { return coords_[k]; }
  double& operator[](std::size_t k) { return coords_[k]; }
  std::span<const double> coords() const { return {coords_.data(), dim_}; }

  bool in_unit_cube() const;

  friend bool operator==(const CovariatePoint& a, const CovariatePoint& b) {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t k = 0; k < a.dim_; ++k)
      if (a.coords_[k] != b.coords_[k]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim> coords_{};
  std::size_t dim_ = 0;
};

using MeanFunction = std::function<double(const CovariatePoint&)>;

// Arms are 1-based in every public operation.
class RewardFunctionSet {
 public:
  RewardFunctionSet(std::string id, std::size_t d, std::vector<MeanFunction> arms);

  // "three_arm" (d = 2), "linear2", "constant". `constants` is only read by
  // "constant"; when empty, arm i gets the value (i-1)/(ell-1).
  static RewardFunctionSet preset(const std::string& name, std::size_t ell, std::size_t d,
                                  const std::vector<double>& constants = {});
  static RewardFunctionSet constant(std::vector<double> values, std::size_t d);

  const std::string& id() const { return id_; }
  std::size_t arms() const { return arms_.size(); }
  std::size_t dim() const { return dim_; }
  const MeanFunction& function(std::size_t arm) const;

 private:
  std::string id_;
  std::size_t dim_;
  std::vector<MeanFunction> arms_;
};

struct GaussianNoise {
  double sd = 0.5;
  double bernstein_v = 0.5;
  double bernstein_c = 0.5;

  // Records (v, c) = (sd, sd).
  static GaussianNoise with_sd(double sd);
};

// Checks E|eps|^m <= m!/2 v^2 c^(m-2) for m = 2..max_m using the closed-form
// absolute moments of N(0, sd^2).
bool bernstein_condition_holds(const GaussianNoise& noise, int max_m = 8);

// E|Z|^m for Z standard normal.
double gaussian_abs_moment(int m);

CovariatePoint sample_covariate(Stream& rng, std::size_t d);
double mean_reward(const RewardFunctionSet& fs, std::size_t arm, const CovariatePoint& x);
double sample_reward(const RewardFunctionSet& fs, const GaussianNoise& noise, std::size_t arm,
                     const CovariatePoint& x, Stream& rng);
std::size_t optimal_arm(const RewardFunctionSet& fs, const CovariatePoint& x);
double optimal_value(const RewardFunctionSet& fs, const CovariatePoint& x);

// Uniform validation grid: 41 points per axis for d <= 2, 11 otherwise.
std::size_t validation_grid_points(std::size_t d);
// Calls visit(x) for every point of the tensor grid {k/(per_axis-1)}^d.
void for_each_grid_point(std::size_t d, std::size_t per_axis,
                         const std::function<void(const CovariatePoint&)>& visit);

struct RewardSetDiagnostics {
  bool nonnegative = true;
  double min_value = 0.0;
  double sup_gap = 0.0;  // A = sup_i sup_x (f*(x) - f_i(x)) on the grid
  bool sup_gap_finite = true;
  double mean_optimal = 0.0;  // Monte-Carlo E f*(X)
};

RewardSetDiagnostics diagnose_reward_set(const RewardFunctionSet& fs, Stream& rng,
                                         std::size_t mc_samples = 10000);

}  // namespace dbl

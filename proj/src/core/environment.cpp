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

#include "core/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "core/errors.hpp"

namespace dbl {

CovariatePoint::CovariatePoint(std::size_t d) : dim_(d) {
  if (d == 0 || d > kMaxDim)
    throw ArgumentError("covariate dimension must be in [1, " + std::to_string(kMaxDim) + "]");
}

CovariatePoint::CovariatePoint(std::initializer_list<double> coords)
    : CovariatePoint(std::span<const double>(coords.begin(), coords.size())) {}

CovariatePoint::CovariatePoint(std::span<const double> coords) : CovariatePoint(coords.size()) {
  std::copy(coords.begin(), coords.end(), coords_.begin());
}

bool CovariatePoint::in_unit_cube() const {
  for (std::size_t k = 0; k < dim_; ++k)
    if (!(coords_[k] >= 0.0 && coords_[k] <= 1.0)) return false;
  return true;
}

RewardFunctionSet::RewardFunctionSet(std::string id, std::size_t d, std::vector<MeanFunction> arms)
    : id_(std::move(id)), dim_(d), arms_(std::move(arms)) {
  if (arms_.size() < 2) throw ValidationError("ell must be >= 2");
  if (d == 0 || d > kMaxDim) throw ValidationError("d must be in [1, 4]");
}

RewardFunctionSet RewardFunctionSet::preset(const std::string& name, std::size_t ell,
                                            std::size_t d, const std::vector<double>& constants) {
  if (name == "three_arm") {
    if (ell != 3) throw ValidationError("reward_preset three_arm requires ell = 3");
    if (d != 2) throw ValidationError("reward_preset three_arm requires d = 2");
    std::vector<MeanFunction> fs;
    fs.emplace_back([](const CovariatePoint& x) { return 0.7 * (x[0] + x[1]); });
    fs.emplace_back(
        [](const CovariatePoint& x) { return 0.5 * std::pow(x[0], 0.75) + std::sin(x[1]); });
    fs.emplace_back([](const CovariatePoint& x) {
      return 2.0 * x[0] / (0.5 + std::pow(1.5 + x[1], 1.5));
    });
    return RewardFunctionSet(name, d, std::move(fs));
  }
  if (name == "linear2") {
    if (ell != 2) throw ValidationError("reward_preset linear2 requires ell = 2");
    auto avg = [](const CovariatePoint& x) {
      double s = 0.0;
      for (double c : x.coords()) s += c;
      return s / static_cast<double>(x.dim());
    };
    std::vector<MeanFunction> fs;
    fs.emplace_back(avg);
    fs.emplace_back([avg](const CovariatePoint& x) { return 1.0 - avg(x); });
    return RewardFunctionSet(name, d, std::move(fs));
  }
  if (name == "constant") {
    std::vector<double> values = constants;
    if (values.empty()) {
      if (ell < 2) throw ValidationError("ell must be >= 2");
      for (std::size_t i = 0; i < ell; ++i)
        values.push_back(static_cast<double>(i) / static_cast<double>(ell - 1));
    }
    if (values.size() != ell)
      throw ValidationError("reward_values must have exactly ell entries");
    return constant(std::move(values), d);
  }
  throw ValidationError("unknown reward_preset \"" + name + "\"");
}

RewardFunctionSet RewardFunctionSet::constant(std::vector<double> values, std::size_t d) {
  std::vector<MeanFunction> fs;
  for (double v : values) fs.emplace_back([v](const CovariatePoint&) { return v; });
  return RewardFunctionSet("constant", d, std::move(fs));
}

const MeanFunction& RewardFunctionSet::function(std::size_t arm) const {
  if (arm < 1 || arm > arms_.size())
    throw ArgumentError("arm " + std::to_string(arm) + " out of range [1, " +
                        std::to_string(arms_.size()) + "]");
  return arms_[arm - 1];
}

GaussianNoise GaussianNoise::with_sd(double sd) {
  if (!(sd >= 0.0) || !std::isfinite(sd)) throw ValidationError("noise sd must be >= 0");
  return {sd, sd, sd};
}

double gaussian_abs_moment(int m) {
  // E|Z|^m = 2^(m/2) Gamma((m+1)/2) / sqrt(pi)
  return std::pow(2.0, m / 2.0) * std::tgamma((m + 1) / 2.0) / std::sqrt(std::numbers::pi);
}

bool bernstein_condition_holds(const GaussianNoise& noise, int max_m) {
  if (noise.sd == 0.0) return true;
  if (!(noise.bernstein_v > 0.0) || !(noise.bernstein_c > 0.0)) return false;
  for (int m = 2; m <= max_m; ++m) {
    const double lhs = std::pow(noise.sd, m) * gaussian_abs_moment(m);
    const double rhs = std::tgamma(m + 1.0) / 2.0 * noise.bernstein_v * noise.bernstein_v *
                       std::pow(noise.bernstein_c, m - 2);
    if (lhs > rhs * (1.0 + 1e-12)) return false;
  }
  return true;
}

CovariatePoint sample_covariate(Stream& rng, std::size_t d) {
  CovariatePoint x(d);
  for (std::size_t k = 0; k < d; ++k) x[k] = rng.uniform();
  return x;
}

double mean_reward(const RewardFunctionSet& fs, std::size_t arm, const CovariatePoint& x) {
  return fs.function(arm)(x);
}

double sample_reward(const RewardFunctionSet& fs, const GaussianNoise& noise, std::size_t arm,
                     const CovariatePoint& x, Stream& rng) {
  const double mean = mean_reward(fs, arm, x);
  if (noise.sd == 0.0) return mean;
  return mean + noise.sd * rng.normal();
}

std::size_t optimal_arm(const RewardFunctionSet& fs, const CovariatePoint& x) {
  std::size_t best = 1;
  double best_value = fs.function(1)(x);
  for (std::size_t i = 2; i <= fs.arms(); ++i) {
    const double v = fs.function(i)(x);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

double optimal_value(const RewardFunctionSet& fs, const CovariatePoint& x) {
  return mean_reward(fs, optimal_arm(fs, x), x);
}

std::size_t validation_grid_points(std::size_t d) { return d <= 2 ? 41 : 11; }

void for_each_grid_point(std::size_t d, std::size_t per_axis,
                         const std::function<void(const CovariatePoint&)>& visit) {
  if (per_axis < 2) throw ArgumentError("grid needs at least 2 points per axis");
  std::array<std::size_t, kMaxDim> idx{};
  CovariatePoint x(d);
  const double step = 1.0 / static_cast<double>(per_axis - 1);
  while (true) {
    for (std::size_t k = 0; k < d; ++k) x[k] = std::min(1.0, static_cast<double>(idx[k]) * step);
    visit(x);
    std::size_t k = 0;
    while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == d) break;
  }
}

RewardSetDiagnostics diagnose_reward_set(const RewardFunctionSet& fs, Stream& rng,
                                         std::size_t mc_samples) {
  RewardSetDiagnostics diag;
  diag.min_value = std::numeric_limits<double>::infinity();
  for_each_grid_point(fs.dim(), validation_grid_points(fs.dim()), [&](const CovariatePoint& x) {
    const double best = optimal_value(fs, x);
    for (std::size_t i = 1; i <= fs.arms(); ++i) {
      const double v = mean_reward(fs, i, x);
      diag.min_value = std::min(diag.min_value, v);
      if (v < 0.0) diag.nonnegative = false;
      if (!std::isfinite(v)) diag.sup_gap_finite = false;
      diag.sup_gap = std::max(diag.sup_gap, best - v);
    }
  });
  if (!std::isfinite(diag.sup_gap)) diag.sup_gap_finite = false;
  double sum = 0.0;
  for (std::size_t s = 0; s < mc_samples; ++s)
    sum += optimal_value(fs, sample_covariate(rng, fs.dim()));
  diag.mean_optimal = mc_samples ? sum / static_cast<double>(mc_samples) : 0.0;
  return diag;
}

}  // namespace dbl

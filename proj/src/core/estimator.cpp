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

#include "core/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace dbl {

Partition::Partition(std::size_t m_per_axis, std::size_t d) : m_(m_per_axis), d_(d), cubes_(1) {
  if (m_ < 1) throw ArgumentError("partition needs at least one bin per axis");
  if (d_ < 1 || d_ > kMaxDim) throw ArgumentError("partition dimension out of range");
  for (std::size_t k = 0; k < d_; ++k) cubes_ *= m_;
}

std::size_t Partition::bin_index(const CovariatePoint& x) const {
  if (x.dim() != d_) throw ArgumentError("covariate dimension does not match partition");
  std::size_t id = 0;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < d_; ++k) {
    const double c = x[k];
    if (!(c >= 0.0 && c <= 1.0))
      throw ArgumentError("coordinate " + std::to_string(c) + " outside [0, 1]");
    const auto idx = std::min(static_cast<std::size_t>(c * static_cast<double>(m_)), m_ - 1);
    id += idx * stride;
    stride *= m_;
  }
  return id;
}

HistogramEstimator::HistogramEstimator(std::size_t arms, Partition partition)
    : partition_(partition),
      raw_(arms),
      bins_(arms, std::vector<BinAggregate>(partition.cubes())),
      totals_(arms) {
  if (arms < 1) throw ArgumentError("estimator needs at least one arm");
}

std::size_t HistogramEstimator::slot(std::size_t arm) const {
  if (arm < 1 || arm > raw_.size())
    throw ArgumentError("arm " + std::to_string(arm) + " out of range");
  return arm - 1;
}

void HistogramEstimator::ingest(std::size_t arm, const CovariatePoint& x, double y) {
  const std::size_t a = slot(arm);
  auto& bin = bins_[a][partition_.bin_index(x)];
  raw_[a].push_back({x, y});
  bin.count += 1;
  bin.sum += y;
  totals_[a].count += 1;
  totals_[a].sum += y;
}

void HistogramEstimator::rebin(const Partition& partition) {
  if (partition.dim() != partition_.dim())
    throw ArgumentError("rebin cannot change the covariate dimension");
  partition_ = partition;
  for (std::size_t a = 0; a < raw_.size(); ++a) {
    bins_[a].assign(partition_.cubes(), BinAggregate{});
    for (const auto& obs : raw_[a]) {
      auto& bin = bins_[a][partition_.bin_index(obs.x)];
      bin.count += 1;
      bin.sum += obs.y;
    }
  }
}

double HistogramEstimator::estimate(std::size_t arm, const CovariatePoint& x) const {
  const std::size_t a = slot(arm);
  const auto& bin = bins_[a][partition_.bin_index(x)];
  if (bin.count > 0) return bin.sum / static_cast<double>(bin.count);
  if (totals_[a].count > 0) return totals_[a].sum / static_cast<double>(totals_[a].count);
  return 0.0;
}

const std::vector<Observation>& HistogramEstimator::raw(std::size_t arm) const {
  return raw_[slot(arm)];
}

const std::vector<BinAggregate>& HistogramEstimator::aggregates(std::size_t arm) const {
  return bins_[slot(arm)];
}

std::size_t HistogramEstimator::total_observed() const {
  std::size_t n = 0;
  for (const auto& r : raw_) n += r.size();
  return n;
}

std::vector<CovariatePoint> sup_error_points(const Partition& partition,
                                             std::size_t grid_resolution) {
  if (grid_resolution < 2) throw ArgumentError("grid_resolution must be >= 2");
  std::vector<CovariatePoint> pts;
  const std::size_t d = partition.dim();
  for_each_grid_point(d, grid_resolution, [&](const CovariatePoint& x) { pts.push_back(x); });
  const std::size_t m = partition.m_per_axis();
  for (std::size_t id = 0; id < partition.cubes(); ++id) {
    CovariatePoint c(d);
    std::size_t rest = id;
    for (std::size_t k = 0; k < d; ++k) {
      c[k] = (static_cast<double>(rest % m) + 0.5) / static_cast<double>(m);
      rest /= m;
    }
    pts.push_back(c);
  }
  return pts;
}

double sup_error(const HistogramEstimator& est, std::size_t arm, const MeanFunction& f_true,
                 std::size_t grid_resolution) {
  double worst = 0.0;
  for (const auto& x : sup_error_points(est.partition(), grid_resolution))
    worst = std::max(worst, std::abs(est.estimate(arm, x) - f_true(x)));
  return worst;
}

double modulus_of_continuity(const MeanFunction& f, std::size_t d, double h,
                             std::size_t grid_resolution) {
  if (!(h > 0.0 && h <= 1.0)) throw ArgumentError("modulus_of_continuity needs 0 < h <= 1");
  if (grid_resolution < 2) throw ArgumentError("grid_resolution must be >= 2");
  if (d < 1 || d > kMaxDim) throw ArgumentError("dimension out of range");

  const std::size_t r = grid_resolution;
  const double step = 1.0 / static_cast<double>(r - 1);
  // Largest index offset whose spacing does not exceed h.
  const auto reach = static_cast<std::size_t>(std::floor(h / step + 1e-9));

  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= r;
  std::vector<double> values(total);
  std::size_t i = 0;
  for_each_grid_point(d, r, [&](const CovariatePoint& x) { values[i++] = f(x); });

  // Each unordered pair appears once as (p, p + offset) with a nonnegative
  // offset on axis 0; the other axes range over [-reach, reach].
  double worst = 0.0;
  std::array<std::size_t, kMaxDim> idx{};
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rest = p;
    for (std::size_t k = 0; k < d; ++k) {
      idx[k] = rest % r;
      rest /= r;
    }
    std::array<long, kMaxDim> off{};
    for (std::size_t k = 1; k < d; ++k) off[k] = -static_cast<long>(reach);
    while (true) {
      std::size_t q = 0;
      std::size_t stride = 1;
      bool inside = true;
      for (std::size_t k = 0; k < d; ++k) {
        const long c = static_cast<long>(idx[k]) + off[k];
        if (c < 0 || c >= static_cast<long>(r)) {
          inside = false;
          break;
        }
        q += static_cast<std::size_t>(c) * stride;
        stride *= r;
      }
      if (inside) worst = std::max(worst, std::abs(values[p] - values[q]));
      std::size_t k = 0;
      while (k < d) {
        if (++off[k] <= static_cast<long>(reach)) break;
        off[k] = k == 0 ? 0 : -static_cast<long>(reach);
        ++k;
      }
      if (k == d) break;
    }
  }
  return worst;
}

}  // namespace dbl

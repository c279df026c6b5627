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
#include <vector>

#include "core/environment.hpp"

namespace dbl {

// Uniform partition of [0,1]^d into m^d cubes of side h = 1/m. Bins are
// half-open [a, a+h) on every axis except the last bin, which is closed at 1.
class Partition {
 public:
  Partition(std::size_t m_per_axis, std::size_t d);

  std::size_t m_per_axis() const { return m_; }
  std::size_t dim() const { return d_; }
  double h() const { return 1.0 / static_cast<double>(m_); }
  std::size_t cubes() const { return cubes_; }

  // Row-major: axis 0 varies fastest, id = sum_k idx_k * m^k.
  std::size_t bin_index(const CovariatePoint& x) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::size_t m_;
  std::size_t d_;
  std::size_t cubes_;
};

struct BinAggregate {
  std::size_t count = 0;
  double sum = 0.0;
};

struct Observation {
  CovariatePoint x;
  double y = 0.0;
};

// Per-arm histogram regression. The raw observations are kept so that the
// aggregates can be rebuilt exactly whenever the partition changes.
class HistogramEstimator {
 public:
  HistogramEstimator(std::size_t arms, Partition partition);

  std::size_t arms() const { return raw_.size(); }
  const Partition& partition() const { return partition_; }

  void ingest(std::size_t arm, const CovariatePoint& x, double y);
  void rebin(const Partition& partition);

  // Bin mean; falls back to the arm's global mean on an empty bin, then to 0.
  double estimate(std::size_t arm, const CovariatePoint& x) const;

  const std::vector<Observation>& raw(std::size_t arm) const;
  const std::vector<BinAggregate>& aggregates(std::size_t arm) const;
  std::size_t observed(std::size_t arm) const { return raw(arm).size(); }
  std::size_t total_observed() const;

 private:
  std::size_t slot(std::size_t arm) const;

  Partition partition_;
  std::vector<std::vector<Observation>> raw_;
  std::vector<std::vector<BinAggregate>> bins_;
  std::vector<BinAggregate> totals_;
};

// Points at which the sup-norm diagnostics are evaluated: the tensor grid
// {k/(r-1)}^d followed by the centres of the partition's cubes.
std::vector<CovariatePoint> sup_error_points(const Partition& partition, std::size_t grid_resolution);

double sup_error(const HistogramEstimator& est, std::size_t arm, const MeanFunction& f_true,
                 std::size_t grid_resolution);

// Grid approximation of sup{|f(x1) - f(x2)| : |x1k - x2k| <= h for all k}.
double modulus_of_continuity(const MeanFunction& f, std::size_t d, double h,
                             std::size_t grid_resolution);

}  // namespace dbl

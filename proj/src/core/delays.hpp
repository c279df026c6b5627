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
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "core/rng.hpp"

namespace dbl {

// Integer delay in rounds; std::nullopt is the NEVER sentinel (the reward is
// not observed at any finite time).
using Delay = std::optional<std::uint64_t>;
inline constexpr std::nullopt_t kNever = std::nullopt;

enum class DelayKind { kNone, kNever, kGeometric, kHalfNormal, kMixture, kEveryKthNever, kQuarterwiseNever };

// Immutable delay model. Composite kinds share their inner model.
class DelayModel {
 public:
  static DelayModel none();
  static DelayModel never();
  static DelayModel geometric(double p);
  static DelayModel half_normal(double sigma);
  static DelayModel mixture(double p_delay, DelayModel inner);
  static DelayModel every_kth_never(std::uint64_t k, DelayModel inner);
  // Quarter q of [1, horizon] only observes indices divisible by ks[q].
  static DelayModel quarterwise_never(std::array<std::uint64_t, 4> ks, std::uint64_t horizon,
                                      DelayModel inner);

  DelayKind kind() const { return kind_; }
  double p() const { return p_; }
  double sigma() const { return sigma_; }
  double p_delay() const { return p_; }
  std::uint64_t k() const { return ks_[0]; }
  const std::array<std::uint64_t, 4>& ks() const { return ks_; }
  std::uint64_t horizon() const { return horizon_; }
  const DelayModel& inner() const { return *inner_; }

  // Same model with every quarterwise horizon replaced.
  DelayModel with_horizon(std::uint64_t horizon) const;

  // True when index j is structurally never observed.
  bool never_at(std::uint64_t j) const;

  std::string describe() const;

 private:
  DelayModel() = default;

  DelayKind kind_ = DelayKind::kNone;
  double p_ = 0.0;
  double sigma_ = 0.0;
  std::array<std::uint64_t, 4> ks_{};
  std::uint64_t horizon_ = 0;
  std::shared_ptr<const DelayModel> inner_;
};

Delay sample_delay(const DelayModel& model, std::uint64_t j, Stream& rng);

// G_j(t) = P(d_j <= t).
double delay_cdf(const DelayModel& model, std::uint64_t j, std::uint64_t t);

// sum_{j=1}^n G_j(n - j)
double partial_sum(const DelayModel& model, std::uint64_t n);

struct DelayDiagnostics {
  double alpha = 1.0;
  double beta = 0.0;
  double c_lower = 0.05;
  std::uint64_t horizon = 10000;
};

struct GrowthReport {
  bool holds = false;
  double min_ratio = 0.0;
};

// Evaluates partial_sum(n) / (n^alpha log^beta n) on a log-spaced grid in
// [10, horizon]; holds when the minimum over the upper half is >= c_lower.
GrowthReport check_growth(const DelayModel& model, const DelayDiagnostics& diag);

}  // namespace dbl

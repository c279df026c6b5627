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

#include "core/delays.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "core/errors.hpp"

namespace dbl {

namespace {

constexpr double kMaxDelay = 4.0e18;

std::uint64_t quarter_of(std::uint64_t j, std::uint64_t horizon) {
  return std::min<std::uint64_t>(3, (j - 1) * 4 / horizon);
}

}  // namespace

DelayModel DelayModel::none() { return DelayModel(); }

DelayModel DelayModel::never() {
  DelayModel m;
  m.kind_ = DelayKind::kNever;
  return m;
}

DelayModel DelayModel::geometric(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("geometric delay needs 0 < p <= 1");
  DelayModel m;
  m.kind_ = DelayKind::kGeometric;
  m.p_ = p;
  return m;
}

DelayModel DelayModel::half_normal(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ValidationError("half_normal delay needs sigma > 0");
  DelayModel m;
  m.kind_ = DelayKind::kHalfNormal;
  m.sigma_ = sigma;
  return m;
}

DelayModel DelayModel::mixture(double p_delay, DelayModel inner) {
  if (!(p_delay >= 0.0 && p_delay <= 1.0)) throw ValidationError("p_delay must be in [0, 1]");
  DelayModel m;
  m.kind_ = DelayKind::kMixture;
  m.p_ = p_delay;
  m.inner_ = std::make_shared<const DelayModel>(std::move(inner));
  return m;
}

DelayModel DelayModel::every_kth_never(std::uint64_t k, DelayModel inner) {
  if (k < 2) throw ValidationError("every_kth_never needs k >= 2");
  DelayModel m;
  m.kind_ = DelayKind::kEveryKthNever;
  m.ks_ = {k, k, k, k};
  m.inner_ = std::make_shared<const DelayModel>(std::move(inner));
  return m;
}

DelayModel DelayModel::quarterwise_never(std::array<std::uint64_t, 4> ks, std::uint64_t horizon,
                                         DelayModel inner) {
  for (auto k : ks)
    if (k < 2) throw ValidationError("quarterwise_never needs every k >= 2");
  if (horizon < 1) throw ValidationError("quarterwise_never needs horizon >= 1");
  DelayModel m;
  m.kind_ = DelayKind::kQuarterwiseNever;
  m.ks_ = ks;
  m.horizon_ = horizon;
  m.inner_ = std::make_shared<const DelayModel>(std::move(inner));
  return m;
}

DelayModel DelayModel::with_horizon(std::uint64_t horizon) const {
  DelayModel m = *this;
  if (inner_) m.inner_ = std::make_shared<const DelayModel>(inner_->with_horizon(horizon));
  if (kind_ == DelayKind::kQuarterwiseNever) m.horizon_ = horizon;
  return m;
}

bool DelayModel::never_at(std::uint64_t j) const {
  switch (kind_) {
    case DelayKind::kNever:
      return true;
    case DelayKind::kEveryKthNever:
      return j % ks_[0] == 0 || inner_->never_at(j);
    case DelayKind::kQuarterwiseNever:
      return j % ks_[quarter_of(j, horizon_)] != 0 || inner_->never_at(j);
    case DelayKind::kMixture:
      return p_ == 1.0 && inner_->never_at(j);
    default:
      return false;
  }
}

std::string DelayModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DelayKind::kNone: os << "none"; break;
    case DelayKind::kNever: os << "never"; break;
    case DelayKind::kGeometric: os << "geometric(p=" << p_ << ")"; break;
    case DelayKind::kHalfNormal: os << "half_normal(sigma=" << sigma_ << ")"; break;
    case DelayKind::kMixture: os << "mixture(p_delay=" << p_ << ", " << inner_->describe() << ")"; break;
    case DelayKind::kEveryKthNever:
      os << "every_kth_never(k=" << ks_[0] << ", " << inner_->describe() << ")";
      break;
    case DelayKind::kQuarterwiseNever:
      os << "quarterwise_never(ks=" << ks_[0] << "/" << ks_[1] << "/" << ks_[2] << "/" << ks_[3]
         << ", horizon=" << horizon_ << ", " << inner_->describe() << ")";
      break;
  }
  return os.str();
}

Delay sample_delay(const DelayModel& model, std::uint64_t j, Stream& rng) {
  if (j < 1) throw ArgumentError("time index must be >= 1");
  switch (model.kind()) {
    case DelayKind::kNone:
      return 0;
    case DelayKind::kNever:
      return kNever;
    case DelayKind::kGeometric: {
      if (model.p() == 1.0) return 0;
      const double u = rng.uniform_pos();
      const double failures = std::floor(std::log(u) / std::log1p(-model.p()));
      return static_cast<std::uint64_t>(std::min(failures, kMaxDelay));
    }
    case DelayKind::kHalfNormal: {
      const double z = std::abs(rng.normal());
      return static_cast<std::uint64_t>(std::min(std::ceil(z * model.sigma()), kMaxDelay));
    }
    case DelayKind::kMixture:
      if (rng.uniform() >= model.p_delay()) return 0;
      return sample_delay(model.inner(), j, rng);
    case DelayKind::kEveryKthNever:
      if (j % model.k() == 0) return kNever;
      return sample_delay(model.inner(), j, rng);
    case DelayKind::kQuarterwiseNever:
      if (j % model.ks()[quarter_of(j, model.horizon())] != 0) return kNever;
      return sample_delay(model.inner(), j, rng);
  }
  throw InternalError("unhandled delay kind");
}

double delay_cdf(const DelayModel& model, std::uint64_t j, std::uint64_t t) {
  switch (model.kind()) {
    case DelayKind::kNone:
      return 1.0;
    case DelayKind::kNever:
      return 0.0;
    case DelayKind::kGeometric:
      return -std::expm1(static_cast<double>(t + 1) * std::log1p(-model.p()));
    case DelayKind::kHalfNormal:
      // ceil(|Z| sigma) <= t  <=>  |Z| <= t / sigma
      return std::erf(static_cast<double>(t) / (model.sigma() * std::numbers::sqrt2));
    case DelayKind::kMixture:
      return (1.0 - model.p_delay()) + model.p_delay() * delay_cdf(model.inner(), j, t);
    case DelayKind::kEveryKthNever:
      if (j % model.k() == 0) return 0.0;
      return delay_cdf(model.inner(), j, t);
    case DelayKind::kQuarterwiseNever:
      if (j % model.ks()[quarter_of(j, model.horizon())] != 0) return 0.0;
      return delay_cdf(model.inner(), j, t);
  }
  throw InternalError("unhandled delay kind");
}

double partial_sum(const DelayModel& model, std::uint64_t n) {
  if (n < 1) throw ArgumentError("partial_sum needs n >= 1");
  double s = 0.0;
  for (std::uint64_t j = 1; j <= n; ++j) s += delay_cdf(model, j, n - j);
  return s;
}

GrowthReport check_growth(const DelayModel& model, const DelayDiagnostics& diag) {
  if (!((diag.alpha > 0.0) || (diag.alpha == 0.0 && diag.beta > 1.0)))
    throw ArgumentError("growth rate needs alpha > 0, or alpha = 0 and beta > 1");
  if (diag.horizon < 10) throw ArgumentError("check_growth needs horizon >= 10");
  if (!(diag.c_lower > 0.0)) throw ArgumentError("c_lower must be > 0");

  constexpr int kPoints = 40;
  std::vector<std::uint64_t> grid;
  const double lo = std::log(10.0);
  const double hi = std::log(static_cast<double>(diag.horizon));
  for (int i = 0; i < kPoints; ++i) {
    const double n = std::exp(lo + (hi - lo) * i / (kPoints - 1));
    const auto v = static_cast<std::uint64_t>(std::llround(n));
    if (grid.empty() || grid.back() != v) grid.push_back(v);
  }
  grid.back() = diag.horizon;

  GrowthReport report;
  report.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = grid.size() / 2; i < grid.size(); ++i) {
    const double n = static_cast<double>(grid[i]);
    const double rate = std::pow(n, diag.alpha) * std::pow(std::log(n), diag.beta);
    report.min_ratio = std::min(report.min_ratio, partial_sum(model, grid[i]) / rate);
  }
  report.holds = report.min_ratio >= diag.c_lower;
  return report;
}

}  // namespace dbl

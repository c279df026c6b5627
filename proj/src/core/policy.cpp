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

#include "core/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"

namespace dbl {

double DecayRule::raw(std::uint64_t n) const {
  const double x = static_cast<double>(n);
  switch (kind) {
    case Kind::kPower:
      return std::pow(x, -exponent);
    case Kind::kLogPower:
    case Kind::kLogInv:
      if (n < 2) return std::numeric_limits<double>::infinity();
      return std::pow(std::log(x), -exponent);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string DecayRule::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kPower: os << "n^-" << exponent; break;
    case Kind::kLogPower: os << "(log n)^-" << exponent; break;
    case Kind::kLogInv: os << "(log n)^-1"; break;
  }
  return os.str();
}

std::string InitPolicy::describe() const {
  switch (mode) {
    case InitMode::kUntilAllObserved: return "until_all_observed";
    case InitMode::kFixedRounds: return "fixed_rounds(" + std::to_string(rounds) + ")";
    case InitMode::kHybrid: return "hybrid(" + std::to_string(rounds) + ")";
  }
  return "?";
}

double pi_at(const Schedule& s, std::uint64_t n, std::size_t ell) {
  if (n < 1) throw ArgumentError("pi_at needs n >= 1");
  if (ell < 2) throw ArgumentError("pi_at needs ell >= 2");
  const double cap = 1.0 / static_cast<double>(ell);
  const double v = std::min(s.pi.raw(n), cap);
  return std::max(v, std::numeric_limits<double>::min());
}

double h_at(const Schedule& s, std::uint64_t n) {
  if (n < 1) throw ArgumentError("h_at needs n >= 1");
  const double v = std::min(s.h.raw(n), 1.0);
  return std::max(v, std::numeric_limits<double>::min());
}

std::size_t snapped_m(const Schedule& s, std::uint64_t n) {
  const double inv = 1.0 / h_at(s, n);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::min(inv, 1e6))));
}

std::size_t greedy_arm(std::span<const double> estimates) {
  if (estimates.empty()) throw ArgumentError("greedy_arm needs at least one estimate");
  std::size_t best = 0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (std::isnan(estimates[i])) throw InternalError("estimator returned NaN");
    if (estimates[i] > estimates[best]) best = i;
  }
  return best + 1;
}

std::size_t select_arm(std::size_t greedy, double pi_n, std::size_t ell, Stream& rng) {
  if (ell < 2) throw ArgumentError("select_arm needs ell >= 2");
  if (greedy < 1 || greedy > ell) throw ArgumentError("greedy arm out of range");
  const double cap = 1.0 / static_cast<double>(ell);
  if (!(pi_n > 0.0 && pi_n <= cap * (1.0 + 1e-12)))
    throw ArgumentError("pi_n must lie in (0, 1/ell]");

  const double u = rng.uniform();
  const double explore_mass = static_cast<double>(ell - 1) * pi_n;
  if (u >= explore_mass) return greedy;
  // The exploration mass is split into ell-1 slots of width pi_n, one per
  // non-greedy arm in increasing order.
  auto slot = static_cast<std::size_t>(u / pi_n);
  slot = std::min(slot, ell - 2);
  const std::size_t arm = slot + 1;
  return arm >= greedy ? arm + 1 : arm;
}

std::optional<std::size_t> init_arm(const InitPolicy& ip, std::uint64_t n,
                                    std::span<const std::size_t> observed_per_arm,
                                    std::size_t ell) {
  if (n < 1) throw ArgumentError("init_arm needs n >= 1");
  const bool all_observed =
      std::all_of(observed_per_arm.begin(), observed_per_arm.end(), [](std::size_t c) { return c > 0; }) &&
      observed_per_arm.size() >= ell;
  bool forced = false;
  switch (ip.mode) {
    case InitMode::kUntilAllObserved:
      forced = !all_observed;
      break;
    case InitMode::kFixedRounds:
      forced = n <= ip.rounds;
      break;
    case InitMode::kHybrid:
      forced = n <= ip.rounds || !all_observed;
      break;
  }
  if (!forced) return std::nullopt;
  return static_cast<std::size_t>((n - 1) % ell) + 1;
}

}  // namespace dbl

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
#include <span>
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace dbl {

// One decay rule for pi_n or h_n.
struct DecayRule {
  enum class Kind { kPower, kLogPower, kLogInv };
  Kind kind = Kind::kPower;
  double exponent = 0.25;

  static DecayRule power(double a) { return {Kind::kPower, a}; }       // n^-a
  static DecayRule logpower(double b) { return {Kind::kLogPower, b}; } // (log n)^-b
  static DecayRule loginv() { return {Kind::kLogInv, 1.0}; }          // (log n)^-1

  // Unclamped value; +inf for log rules at n = 1.
  double raw(std::uint64_t n) const;
  std::string describe() const;
};

struct Schedule {
  DecayRule pi = DecayRule::power(0.25);
  DecayRule h = DecayRule::loginv();
};

enum class InitMode { kUntilAllObserved, kFixedRounds, kHybrid };

struct InitPolicy {
  InitMode mode = InitMode::kHybrid;
  std::uint64_t rounds = 0;

  static InitPolicy until_all_observed() { return {InitMode::kUntilAllObserved, 0}; }
  static InitPolicy fixed_rounds(std::uint64_t r) { return {InitMode::kFixedRounds, r}; }
  static InitPolicy hybrid(std::uint64_t r) { return {InitMode::kHybrid, r}; }

  bool waits_for_observations() const { return mode != InitMode::kFixedRounds; }
  std::string describe() const;
};

// pi_n clamped to (0, 1/ell].
double pi_at(const Schedule& s, std::uint64_t n, std::size_t ell);
// h_n clamped to (0, 1].
double h_at(const Schedule& s, std::uint64_t n);
// max(1, round(1/h_n))
std::size_t snapped_m(const Schedule& s, std::uint64_t n);

// Smallest 1-based index attaining the maximum. NaN raises InternalError.
std::size_t greedy_arm(std::span<const double> estimates);

// Greedy arm with probability 1-(ell-1)pi, any other arm with probability pi.
// Consumes exactly one uniform.
std::size_t select_arm(std::size_t greedy, double pi_n, std::size_t ell, Stream& rng);

// Forced round-robin allocation; std::nullopt once initialization is over.
std::optional<std::size_t> init_arm(const InitPolicy& ip, std::uint64_t n,
                                    std::span<const std::size_t> observed_per_arm, std::size_t ell);

}  // namespace dbl

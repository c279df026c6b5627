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

#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "core/errors.hpp"
#include "core/policy.hpp"

using namespace dbl;

namespace {

std::array<std::size_t, 4> tally(std::size_t greedy, double pi, std::size_t draws, std::uint64_t seed) {
  Stream rng(seed);
  std::array<std::size_t, 4> counts{};
  for (std::size_t i = 0; i < draws; ++i) counts[select_arm(greedy, pi, 3, rng)]++;
  return counts;
}

}  // namespace

TEST_CASE("pi_at examples") {
  Schedule s;
  s.pi = DecayRule::power(0.25);
  CHECK(pi_at(s, 16, 3) == doctest::Approx(1.0 / 3.0));
  CHECK(pi_at(s, 10000, 3) == doctest::Approx(0.1));
  s.pi = DecayRule::power(1.0 / 6.0);
  CHECK(pi_at(s, 1000000, 3) < pi_at(s, 1000, 3));
  s.pi = DecayRule::logpower(1.0);
  CHECK(pi_at(s, 1, 3) == doctest::Approx(1.0 / 3.0));  // raw value is +inf
  CHECK_THROWS_AS(pi_at(s, 0, 3), ArgumentError);
  CHECK_THROWS_AS(pi_at(s, 5, 1), ArgumentError);
}

TEST_CASE("h_at and snapped_m examples") {
  Schedule s;
  s.h = DecayRule::loginv();
  CHECK(h_at(s, 55) == doctest::Approx(1.0 / std::log(55.0)));
  CHECK(snapped_m(s, 55) == 4);
  CHECK(h_at(s, 1) == 1.0);
  CHECK(snapped_m(s, 1) == 1);
  CHECK(h_at(s, 2) == 1.0);  // 1/log 2 > 1
  s.h = DecayRule::power(1.0 / 6.0);
  CHECK(h_at(s, 64) == doctest::Approx(0.5));
  CHECK(snapped_m(s, 64) == 2);
  s.h = DecayRule::logpower(0.5);
  CHECK(h_at(s, 2) == 1.0);
  CHECK(h_at(s, 3) == doctest::Approx(std::pow(std::log(3.0), -0.5)));
}

TEST_CASE("schedules stay in range and decay") {
  const std::vector<DecayRule> rules = {DecayRule::power(0.25), DecayRule::power(1.0 / 6.0),
                                        DecayRule::logpower(0.25), DecayRule::loginv()};
  for (const auto& r : rules) {
    Schedule s{r, r};
    for (std::uint64_t n = 1; n < 5000; n = n < 100 ? n + 1 : n * 11 / 10) {
      const double p = pi_at(s, n, 3);
      const double h = h_at(s, n);
      CHECK(p > 0.0);
      CHECK(p <= 1.0 / 3.0);
      CHECK(h > 0.0);
      CHECK(h <= 1.0);
      CHECK(snapped_m(s, n) >= 1);
      if (n >= 3) {
        CHECK(pi_at(s, n + 1, 3) <= p);
        CHECK(h_at(s, n + 1) <= h);
        // greedy mass dominates each non-greedy arm
        CHECK(1.0 - 2.0 * p >= p - 1e-15);
      }
    }
  }
}

TEST_CASE("greedy_arm") {
  const std::vector<double> a{0.2, 0.9, 0.4};
  CHECK(greedy_arm(a) == 2);
  const std::vector<double> b{0.5, 0.5, 0.1};
  CHECK(greedy_arm(b) == 1);
  for (double c : {-3.0, 0.0, 7.5}) {
    const std::vector<double> t{c, c, c};
    CHECK(greedy_arm(t) == 1);
  }
  const std::vector<double> bad{0.1, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(greedy_arm(bad), InternalError);
  CHECK_THROWS_AS(greedy_arm(std::vector<double>{}), ArgumentError);
}

TEST_CASE("greedy_arm is invariant to a common shift") {
  Stream rng(9);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> e(4);
    for (auto& v : e) v = std::round(rng.uniform() * 8.0) / 8.0;  // ties likely
    const double c = rng.uniform() * 4.0 - 2.0;
    // a dyadic shift keeps ties exact
    const double dyadic = std::round(c * 8.0) / 8.0;
    std::vector<double> exact = e;
    for (auto& v : exact) v += dyadic;
    CHECK(greedy_arm(exact) == greedy_arm(e));
  }
}

TEST_CASE("select_arm validates its inputs") {
  Stream rng(1);
  CHECK_THROWS_AS(select_arm(1, 0.0, 3, rng), ArgumentError);
  CHECK_THROWS_AS(select_arm(1, 0.5, 3, rng), ArgumentError);
  CHECK_THROWS_AS(select_arm(0, 0.1, 3, rng), ArgumentError);
  CHECK_THROWS_AS(select_arm(4, 0.1, 3, rng), ArgumentError);
  CHECK_THROWS_AS(select_arm(1, 0.1, 1, rng), ArgumentError);
}

TEST_CASE("select_arm consumes exactly one uniform") {
  Stream a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    select_arm(2, 0.2, 3, a);
    b.uniform();
  }
  CHECK(a.uniform() == b.uniform());
}

TEST_CASE("select_arm slot mapping") {
  // u below 2*pi explores; slot floor(u/pi) maps onto the non-greedy arms in order.
  const double pi = 0.25;
  Stream rng(5);
  for (int i = 0; i < 2000; ++i) {
    Stream copy = rng;
    const double u = copy.uniform();
    const std::size_t got = select_arm(2, pi, 3, rng);
    const std::size_t want = u < pi ? 1 : (u < 2 * pi ? 3 : 2);
    CHECK(got == want);
  }
}

TEST_CASE("select_arm frequencies") {
  SUBCASE("uniform at pi = 1/3") {
    const auto c = tally(2, 1.0 / 3.0, 30000, 3);
    for (std::size_t arm = 1; arm <= 3; ++arm) CHECK(std::abs(c[arm] / 30000.0 - 1.0 / 3.0) < 0.02);
  }
  SUBCASE("degenerate pi") {
    const auto c = tally(1, 1e-9, 10000, 4);
    CHECK(c[1] == 10000);
  }
  SUBCASE("greedy 3 at pi = 0.1") {
    const std::size_t n = 100000;
    const auto c = tally(3, 0.1, n, 5);
    const double want[] = {0.0, 0.1, 0.1, 0.8};
    for (std::size_t arm = 1; arm <= 3; ++arm) {
      const double se = std::sqrt(want[arm] * (1 - want[arm]) / n);
      CHECK(std::abs(c[arm] / double(n) - want[arm]) <= 3 * se);
    }
  }
}

TEST_CASE("init_arm") {
  const std::vector<std::size_t> none{0, 0, 0};
  const std::vector<std::size_t> all{1, 2, 1};
  const std::vector<std::size_t> partial{1, 0, 3};
  const auto until = InitPolicy::until_all_observed();
  CHECK(init_arm(until, 1, none, 3) == 1u);
  CHECK(init_arm(until, 2, none, 3) == 2u);
  CHECK(init_arm(until, 3, none, 3) == 3u);
  CHECK(init_arm(until, 4, partial, 3) == 1u);
  CHECK_FALSE(init_arm(until, 4, all, 3).has_value());

  const auto fixed = InitPolicy::fixed_rounds(30);
  CHECK(init_arm(fixed, 30, all, 3) == 3u);
  CHECK_FALSE(init_arm(fixed, 31, none, 3).has_value());

  const auto hyb = InitPolicy::hybrid(30);
  CHECK(init_arm(hyb, 10, all, 3) == 1u);
  CHECK(init_arm(hyb, 31, partial, 3) == 1u);
  CHECK(init_arm(hyb, 32, partial, 3) == 2u);
  CHECK_FALSE(init_arm(hyb, 31, all, 3).has_value());
  CHECK_THROWS_AS(init_arm(hyb, 0, all, 3), ArgumentError);
}

TEST_CASE("describe strings") {
  CHECK(DecayRule::power(0.25).describe() == "n^-0.25");
  CHECK(DecayRule::loginv().describe() == "(log n)^-1");
  CHECK(InitPolicy::hybrid(30).describe() == "hybrid(30)");
  CHECK(InitPolicy::fixed_rounds(5).describe() == "fixed_rounds(5)");
}

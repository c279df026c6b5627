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

#include <cmath>
#include <numbers>
#include <vector>

#include "core/delays.hpp"
#include "core/errors.hpp"

using namespace dbl;

TEST_CASE("degenerate delay models") {
  Stream rng(1);
  CHECK(sample_delay(DelayModel::none(), 7, rng) == Delay{0});
  for (std::uint64_t j = 1; j < 200; ++j) CHECK(sample_delay(DelayModel::geometric(1.0), j, rng) == Delay{0});
  CHECK(sample_delay(DelayModel::never(), 3, rng) == kNever);
  CHECK_THROWS_AS(sample_delay(DelayModel::none(), 0, rng), ArgumentError);
}

TEST_CASE("geometric delay mean") {
  Stream rng(99);
  const auto model = DelayModel::geometric(0.3);
  const int n = 100000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += static_cast<double>(*sample_delay(model, 1 + i, rng));
  const double expected = 0.7 / 0.3;
  CHECK(std::abs(s / n - expected) < 0.02 * expected);
}

TEST_CASE("every k-th reward is never observed") {
  Stream rng(2);
  const auto model = DelayModel::every_kth_never(5, DelayModel::geometric(0.3));
  CHECK(sample_delay(model, 10, rng) == kNever);
  CHECK(sample_delay(model, 11, rng).has_value());
  CHECK(delay_cdf(model, 5, 0) == 0.0);
  CHECK(delay_cdf(model, 5, 1000) == 0.0);
}

TEST_CASE("quarterwise never follows the quarter of the horizon") {
  Stream rng(3);
  // horizon 1000: quarters are [1,250], [251,500], [501,750], [751,1000]
  const auto model = DelayModel::quarterwise_never({10, 15, 20, 25}, 1000, DelayModel::none());
  CHECK(sample_delay(model, 10, rng) == Delay{0});
  CHECK(sample_delay(model, 11, rng) == kNever);
  CHECK(sample_delay(model, 250, rng) == Delay{0});
  CHECK(sample_delay(model, 251, rng) == kNever);
  CHECK(sample_delay(model, 255, rng) == Delay{0});
  CHECK(delay_cdf(model, 260, 0) == 0.0);
  CHECK(delay_cdf(model, 520, 0) == 1.0);
  CHECK(delay_cdf(model, 525, 0) == 0.0);
  CHECK(delay_cdf(model, 760, 0) == 0.0);
  CHECK(delay_cdf(model, 775, 0) == 1.0);
  CHECK(delay_cdf(model, 1000, 0) == 1.0);
  CHECK(model.with_horizon(2000).horizon() == 2000);
  CHECK(delay_cdf(model.with_horizon(2000), 260, 0) == 1.0);  // now quarter 1 with k = 10
}

TEST_CASE("delay cdf closed forms") {
  CHECK(delay_cdf(DelayModel::none(), 4, 0) == 1.0);
  CHECK(delay_cdf(DelayModel::geometric(0.3), 9, 2) == doctest::Approx(1.0 - std::pow(0.7, 3)));
  CHECK(delay_cdf(DelayModel::geometric(0.3), 9, 2) == doctest::Approx(0.657));
  CHECK(delay_cdf(DelayModel::half_normal(2.0), 1, 0) == 0.0);
  CHECK(delay_cdf(DelayModel::half_normal(2.0), 1, 3) ==
        doctest::Approx(std::erf(3.0 / (2.0 * std::numbers::sqrt2))));
  const auto mix = DelayModel::mixture(0.7, DelayModel::half_normal(1500));
  CHECK(delay_cdf(mix, 1, 0) == doctest::Approx(0.3));
}

TEST_CASE("delay cdf is monotone and bounded") {
  const std::vector<DelayModel> models = {
      DelayModel::none(), DelayModel::geometric(0.3), DelayModel::half_normal(7.5),
      DelayModel::mixture(0.7, DelayModel::half_normal(15)),
      DelayModel::every_kth_never(5, DelayModel::geometric(0.3)),
      DelayModel::quarterwise_never({10, 15, 20, 25}, 400, DelayModel::geometric(0.3))};
  for (const auto& m : models) {
    for (std::uint64_t j = 1; j <= 400; j += 7) {
      double prev = -1.0;
      for (std::uint64_t t = 0; t < 60; ++t) {
        const double g = delay_cdf(m, j, t);
        CHECK(g >= prev);
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);
        if (m.never_at(j)) CHECK(g == 0.0);
        prev = g;
      }
    }
  }
}

TEST_CASE("empirical delay frequencies agree with the cdf") {
  const std::vector<DelayModel> models = {DelayModel::geometric(0.3),
                                          DelayModel::mixture(0.7, DelayModel::geometric(0.2)),
                                          DelayModel::mixture(0.7, DelayModel::half_normal(4.0))};
  const int n = 100000;
  for (const auto& m : models) {
    Stream rng(12345);
    std::vector<std::uint64_t> draws;
    for (int i = 0; i < n; ++i) draws.push_back(*sample_delay(m, 1 + i, rng));
    for (std::uint64_t t : {0, 1, 2, 5, 10}) {
      double hits = 0;
      for (auto d : draws) hits += d <= t ? 1 : 0;
      const double p = delay_cdf(m, 1, t);
      const double sigma = std::sqrt(p * (1 - p) / n);
      CHECK(std::abs(hits / n - p) <= 3.0 * sigma + 1e-12);
    }
  }
}

TEST_CASE("partial sums") {
  CHECK(partial_sum(DelayModel::none(), 100) == 100.0);
  // sum_{j=1}^{100} (1 - 0.7^(101-j)) = 100 - sum_{k=1}^{100} 0.7^k
  const double geometric_series = 0.7 * (1.0 - std::pow(0.7, 100)) / 0.3;
  CHECK(partial_sum(DelayModel::geometric(0.3), 100) == doctest::Approx(100.0 - geometric_series));
  CHECK(partial_sum(DelayModel::every_kth_never(5, DelayModel::none()), 100) == 80.0);
  CHECK(partial_sum(DelayModel::never(), 50) == 0.0);
  CHECK_THROWS_AS(partial_sum(DelayModel::none(), 0), ArgumentError);
}

TEST_CASE("partial sums are nondecreasing in n") {
  const std::vector<DelayModel> models = {
      DelayModel::geometric(0.3), DelayModel::mixture(0.7, DelayModel::half_normal(50)),
      DelayModel::every_kth_never(5, DelayModel::geometric(0.3)),
      DelayModel::quarterwise_never({10, 15, 20, 25}, 300, DelayModel::geometric(0.3))};
  for (const auto& m : models) {
    double prev = 0.0;
    for (std::uint64_t n = 1; n <= 300; ++n) {
      const double s = partial_sum(m, n);
      CHECK(s >= prev - 1e-12);
      prev = s;
    }
  }
}

TEST_CASE("growth condition checks") {
  DelayDiagnostics linear{1.0, 0.0, 0.5, 10000};
  CHECK(check_growth(DelayModel::none(), linear).holds);
  CHECK(check_growth(DelayModel::none(), linear).min_ratio == doctest::Approx(1.0));
  CHECK(check_growth(DelayModel::geometric(0.3), linear).holds);
  const auto lost = check_growth(DelayModel::never(), {0.0, 2.0, 1e-6, 10000});
  CHECK_FALSE(lost.holds);
  CHECK(lost.min_ratio == 0.0);
  CHECK_THROWS_AS(check_growth(DelayModel::none(), {0.0, 1.0, 0.5, 100}), ArgumentError);
  CHECK_THROWS_AS(check_growth(DelayModel::none(), {1.0, 0.0, 0.5, 5}), ArgumentError);
}

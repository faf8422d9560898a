// Copyright 2026 The vmassign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "brute_force.hpp"
#include "vmassign/error.hpp"
#include "vmassign/load_sum.hpp"
#include "vmassign/power_model.hpp"

using namespace vmassign;

namespace {

const PowerParams kCubic{1.0, 3.0, 2.0};

}  // namespace

TEST_CASE("machine_power") {
  CHECK(machine_power(0.0, kCubic) == 0.0);
  CHECK(machine_power(1.0, kCubic) == 3.0);
  CHECK(machine_power(2.0, kCubic) == 10.0);
  CHECK(machine_power(2.0, PowerParams{0.5, 3.0, 2.0}) == 6.0);
}

TEST_CASE("partition_power sums busy machines") {
  CHECK(partition_power({{1.0}, {1.0}}, kCubic) == 6.0);
  CHECK(partition_power({{1.0, 1.0}}, kCubic) == 10.0);
  CHECK(partition_power({{0.5, 0.5}}, kCubic) == 3.0);
  CHECK(partition_power({{0.5}, {0.5}}, kCubic) == 4.25);
  CHECK(partition_power({{}, {1.0}}, kCubic) == 3.0);
  const std::vector<double> loads = {0.5, 0.0, 2.0};
  CHECK(power_of_loads(loads, kCubic) == 12.125);
}

TEST_CASE("power_of_loads ignores machine order") {
  std::mt19937_64 g(11);
  for (int t = 0; t < 200; ++t) {
    auto loads = brute::random_loads(g, 7, 0.01, 3.0);
    const double before = power_of_loads(loads, kCubic);
    std::shuffle(loads.begin(), loads.end(), g);
    CHECK(power_of_loads(loads, kCubic) == before);
  }
}

TEST_CASE("optimal load and rate") {
  CHECK(optimal_load(kCubic) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(optimal_load(PowerParams{1.0, 2.0, 4.0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(optimal_load(PowerParams{1.0, 2.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(optimal_power_rate(kCubic) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(optimal_power_rate(PowerParams{1.0, 2.0, 4.0}) == doctest::Approx(4.0).epsilon(1e-15));
  // mu rescales x*: (b / (mu (alpha - 1)))^(1/alpha).
  CHECK(optimal_load(PowerParams{0.25, 3.0, 2.0}) == doctest::Approx(std::cbrt(4.0)));
}

TEST_CASE("power per unit load is minimized at x*") {
  std::mt19937_64 g(3);
  for (int t = 0; t < 1000; ++t) {
    const PowerParams p{brute::uniform(g, 0.2, 3.0), brute::uniform(g, 1.2, 5.0),
                        brute::uniform(g, 0.1, 5.0)};
    const double xs = optimal_load(p);
    double x = brute::uniform(g, 0.01, 4.0) * xs;
    if (std::fabs(x - xs) < 1e-3 * xs) x = 2.0 * xs;
    CHECK(machine_power(x, p) / x > optimal_power_rate(p));
  }
}

TEST_CASE("merge_delta") {
  CHECK(merge_delta(0.5, 0.5, kCubic) == -1.25);
  CHECK(merge_delta(1.0, 1.0, kCubic) == 4.0);
  CHECK(merge_delta(0.3, 0.3, kCubic) < 0.0);
}

TEST_CASE("merging below x* always saves power") {
  std::mt19937_64 g(5);
  for (int t = 0; t < 1000; ++t) {
    const PowerParams p{brute::uniform(g, 0.2, 3.0), brute::uniform(g, 1.1, 5.0),
                        brute::uniform(g, 0.1, 5.0)};
    const double xs = optimal_load(p);
    const double sum = brute::uniform(g, 1e-6, 1.0) * xs;
    const double a = brute::uniform(g, 0.001, 0.999) * sum;
    CHECK(merge_delta(a, sum - a, p) < 0.0);
  }
}

TEST_CASE("splitting a load more evenly lowers power") {
  std::mt19937_64 g(7);
  for (int t = 0; t < 1000; ++t) {
    const PowerParams p{brute::uniform(g, 0.2, 3.0), brute::uniform(g, 1.1, 5.0),
                        brute::uniform(g, 0.1, 5.0)};
    const double total = brute::uniform(g, 0.1, 10.0);
    double d1 = brute::uniform(g, 0.0, 0.5);
    double d2 = brute::uniform(g, 0.0, 0.5);
    if (d2 > d1) std::swap(d1, d2);
    if (d1 - d2 < 1e-3 || d2 < 1e-3) continue;
    const double even = machine_power(d1 * total, p) + machine_power((1 - d1) * total, p);
    const double skew = machine_power(d2 * total, p) + machine_power((1 - d2) * total, p);
    CHECK(even < skew);
  }
}

TEST_CASE("balanced_lower_bound") {
  CHECK(balanced_lower_bound(3, 2.0, kCubic) == doctest::Approx(62.0 / 9.0).epsilon(1e-15));
  CHECK(balanced_lower_bound(2, 2.0, kCubic) == 6.0);
  CHECK(balanced_lower_bound(1, 2.0, kCubic) == 10.0);
}

TEST_CASE("min_balanced_lower_bound matches a scan over k") {
  std::mt19937_64 g(13);
  for (int t = 0; t < 500; ++t) {
    const PowerParams p{brute::uniform(g, 0.2, 3.0), brute::uniform(g, 1.1, 5.0),
                        brute::uniform(g, 0.1, 5.0)};
    const double total = brute::uniform(g, 0.01, 20.0) * optimal_load(p);
    const std::size_t lo = 1 + g() % 5;
    const std::size_t hi = lo + g() % 30;
    double best = INFINITY;
    for (std::size_t k = lo; k <= hi; ++k) {
      best = std::min(best, balanced_lower_bound(k, total, p));
    }
    CHECK(min_balanced_lower_bound(total, p, lo, hi) == doctest::Approx(best).epsilon(1e-14));
  }
}

TEST_CASE("every k-machine partition costs at least the balanced bound") {
  std::mt19937_64 g(17);
  for (int t = 0; t < 300; ++t) {
    const PowerParams p{1.0, brute::uniform(g, 1.1, 4.0), brute::uniform(g, 0.5, 3.0)};
    const auto loads = brute::random_loads(g, 6, 0.05, 2.0);
    const double total = accurate_sum(loads);
    brute::for_each_partition(loads.size(), [&](const auto& groups) {
      const auto sums = brute::sums_of(groups, loads);
      const double power = power_of_loads(sums, p);
      CHECK(power >= balanced_lower_bound(groups.size(), total, p) * (1 - 1e-12));
    });
  }
}

TEST_CASE("rate_lower_bound") {
  CHECK(rate_lower_bound(2.0, kCubic) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(rate_lower_bound(optimal_load(kCubic), kCubic) ==
        doctest::Approx(machine_power(1.0, kCubic)).epsilon(1e-15));
}

TEST_CASE("power below the rate bound is impossible off x*") {
  std::mt19937_64 g(19);
  for (int t = 0; t < 200; ++t) {
    const PowerParams p{1.0, brute::uniform(g, 1.1, 4.0), brute::uniform(g, 0.5, 3.0)};
    const auto loads = brute::random_loads(g, 1 + g() % 7, 0.05, 2.0);
    const auto opt = brute::optimum(loads, {p.mu, p.alpha, p.b, {}, {}});
    CHECK(opt.power > rate_lower_bound(accurate_sum(loads), p));
  }
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate(kCubic));
  auto code = [](const PowerParams& p) {
    try {
      validate(p);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(code({1.0, 1.0, 2.0}) == "alpha must exceed 1");
  CHECK(code({1.0, 3.0, 0.0}) == "b must be positive");
  CHECK(code({0.0, 3.0, 2.0}) == "mu must be positive");
  CHECK(code({1.0, NAN, 2.0}) == "alpha must exceed 1");
}

TEST_CASE("compensated load sums") {
  LoadSum s;
  for (int i = 0; i < 50; ++i) s.add(0.01);
  CHECK(s.value() == 0.5);
  const std::vector<double> xs = {0.1, 0.2, 0.7};
  CHECK(accurate_sum(xs) == 1.0);
}

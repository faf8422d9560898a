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

#include <random>
#include <vector>

#include <doctest.h>

#include "brute_force.hpp"
#include "vmassign/error.hpp"
#include "vmassign/exact.hpp"
#include "vmassign/offline.hpp"

using namespace vmassign;

namespace {

Instance make(std::vector<double> loads, std::optional<double> c = {},
              std::optional<std::size_t> m = {}, PowerParams p = {}) {
  return Instance{p, Resources{c, m}, std::move(loads)};
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

// Random instance with loads that always fit C.
Instance random_instance(std::mt19937_64& g, std::size_t n_max) {
  PowerParams p{1.0, brute::uniform(g, 1.2, 4.0), brute::uniform(g, 0.3, 4.0)};
  std::optional<double> c;
  if (g() % 3) c = brute::uniform(g, 0.5, 3.0);
  const double hi = c.value_or(3.0);
  return make(brute::random_loads(g, 1 + g() % n_max, 0.05 * hi, hi), c, {}, p);
}

}  // namespace

TEST_CASE("ffd_pack") {
  CHECK(ffd_pack(std::vector<double>{0.6, 0.5, 0.4, 0.3, 0.2}, 1.0) ==
        Partition{{{0, 2}, {1, 3, 4}}});
  CHECK(ffd_pack(std::vector<double>{0.6, 0.6, 0.6}, 1.0) == Partition{{{0}, {1}, {2}}});
  CHECK(ffd_pack(std::vector<double>{1.0}, 1.0) == Partition{{{0}}});
  CHECK(ffd_pack(std::vector<double>{0.2, 0.5, 0.2}, 1.0) == Partition{{{0, 1, 2}}});
  CHECK(code_of([] { ffd_pack(std::vector<double>{1.1}, 1.0); }) ==
        ErrorCode::kOversizedItem);
}

TEST_CASE("ffd_pack stays within 11/9 of the optimal bin count plus one") {
  std::mt19937_64 g(47);
  for (int t = 0; t < 1000; ++t) {
    const auto loads = brute::random_loads(g, 1 + g() % 10, 0.05, 1.0);
    const std::size_t used = ffd_pack(loads, 1.0).machines();
    const std::size_t best = min_bins(loads, 1.0);
    CHECK(used >= best);
    CHECK(static_cast<double>(used) <= 11.0 / 9.0 * static_cast<double>(best) + 1.0);
  }
}

TEST_CASE("solve_capacity") {
  CHECK(solve_capacity(make({0.5, 0.4}, 1.0)) == Partition{{{0, 1}}});
  CHECK(solve_capacity(make({0.6, 0.6}, 1.0)).machines() == 2);
  CHECK(code_of([] { solve_capacity(make({0.5})); }) == ErrorCode::kNotApplicable);
  CHECK(code_of([] { solve_capacity(make({1.5}, 1.0)); }) == ErrorCode::kOversizedItem);
  CHECK(code_of([] { solve_capacity(make({0.6, 0.6, 0.6}, 1.0, 2)); }) ==
        ErrorCode::kMachinesExceeded);
}

TEST_CASE("solve_optimal_load") {
  CHECK(solve_optimal_load(make({0.5, 0.4}, 2.0)) == Partition{{{0, 1}}});
  CHECK(solve_optimal_load(make({0.6, 0.6, 0.6}, 2.0)).machines() == 3);

  const Instance mixed = make({1.5, 0.3}, 2.0);
  const Partition p = solve_optimal_load(mixed);
  CHECK(canonical(p) == Partition{{{0}, {1}}});
  CHECK(partition_power(mixed, p) == doctest::Approx(optimal_partition(mixed).power));

  CHECK(code_of([] { solve_optimal_load(make({0.5}, 1.0)); }) == ErrorCode::kRegimeMismatch);
  CHECK(solve_optimal_load(make({0.5, 0.5, 0.5})).machines() == 2);
}

TEST_CASE("solve_regime_matched picks by x* against C") {
  CHECK(solve_regime_matched(make({0.6, 0.6}, 1.0)).machines() == 2);
  CHECK(solve_regime_matched(make({0.6, 0.6}, 2.0)).machines() == 2);
  CHECK(solve_regime_matched(make({0.3, 0.3})).machines() == 1);
}

TEST_CASE("balanced_k") {
  const Instance halves = make({0.5, 0.5});
  CHECK(partition_power(halves, balanced_k(halves)) == 3.0);

  const Instance two = make({6, 6, 12}, std::nullopt, 2);
  const Partition p = balanced_k(two);
  CHECK(canonical(p) == Partition{{{0, 1}, {2}}});
  CHECK(partition_power(two, p) == 3460.0);

  const Instance ones = make({1, 1});
  CHECK(partition_power(ones, balanced_k(ones)) == 6.0);

  CHECK(code_of([] { balanced_k(make({0.6, 0.6, 0.6}, 1.0, 2)); }) == ErrorCode::kInfeasible);
}

TEST_CASE("local_improve") {
  const Instance pair = make({0.3, 0.3});
  CHECK(local_improve(Partition{{{0}, {1}}}, pair) == Partition{{{0, 1}}});

  const Instance skew = make({1.0, 0.9, 0.1});
  const Partition start{{{0, 1}, {2}}};
  const Partition out = local_improve(start, skew);
  CHECK(canonical(out) == Partition{{{0}, {1, 2}}});
  CHECK(partition_power(skew, out) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("heuristics are feasible and never beat the oracle") {
  std::mt19937_64 g(53);
  for (int t = 0; t < 300; ++t) {
    const Instance inst = random_instance(g, 8);
    const double opt = optimal_partition(inst).power;
    const double floor = opt * (1 - 1e-12);

    const Partition matched = solve_regime_matched(inst);
    CHECK(validate(inst, matched).empty());
    CHECK(partition_power(inst, matched) >= floor);

    const Partition bal = balanced_k(inst);
    CHECK(validate(inst, bal).empty());
    CHECK(partition_power(inst, bal) >= floor);

    const Partition loc = local_improve(bal, inst);
    CHECK(validate(inst, loc).empty());
    CHECK(partition_power(inst, loc) <= partition_power(inst, bal));
    CHECK(partition_power(inst, loc) >= floor);
    CHECK(local_improve(loc, inst) == loc);
  }
}

TEST_CASE("local_improve keeps machine limits and improves arbitrary starts") {
  std::mt19937_64 g(59);
  for (int t = 0; t < 300; ++t) {
    Instance inst = random_instance(g, 9);
    // Random feasible start: FFD at C (or one machine per VM without C).
    Partition start;
    if (inst.resources.capacity) {
      start = ffd_pack(inst.loads, *inst.resources.capacity);
    } else {
      for (std::size_t i = 0; i < inst.size(); ++i) start.groups.push_back({i});
    }
    inst.resources.machines = start.machines();
    const Partition out = local_improve(start, inst);
    CHECK(validate(inst, out).empty());
    CHECK(partition_power(inst, out) <= partition_power(inst, start));
    CHECK(local_improve(out, inst) == out);
  }
}

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
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "vmassign/error.hpp"
#include "vmassign/instance.hpp"
#include "vmassign/power_model.hpp"

using namespace vmassign;

namespace {

Instance make(std::vector<double> loads, std::optional<double> c = {},
              std::optional<std::size_t> m = {}) {
  return Instance{PowerParams{}, Resources{c, m}, std::move(loads)};
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

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("partition validation") {
  CHECK(validate(make({0.5, 0.5}, 1.0), Partition{{{0, 1}}}).empty());

  const auto over = validate(make({0.8, 0.8}, 1.0), Partition{{{0, 1}}});
  REQUIRE(over.size() == 1);
  CHECK(over[0].kind == Violation::Kind::kCapacity);
  CHECK(over[0].group == 0);

  const auto count = validate(make({1, 1}, std::nullopt, 1), Partition{{{0}, {1}}});
  REQUIRE(count.size() == 1);
  CHECK(count[0].kind == Violation::Kind::kMachineCount);

  const auto broken = validate(make({1, 1, 1}), Partition{{{0, 0}, {}, {5}}});
  std::vector<Violation::Kind> kinds;
  for (const auto& v : broken) kinds.push_back(v.kind);
  CHECK(std::count(kinds.begin(), kinds.end(), Violation::Kind::kDuplicateIndex) == 1);
  CHECK(std::count(kinds.begin(), kinds.end(), Violation::Kind::kEmptyGroup) == 1);
  CHECK(std::count(kinds.begin(), kinds.end(), Violation::Kind::kIndexOutOfRange) == 1);
  CHECK(std::count(kinds.begin(), kinds.end(), Violation::Kind::kMissingIndex) == 2);
}

TEST_CASE("a machine filled exactly to C by decimal loads fits") {
  CHECK(validate(make({0.1, 0.2, 0.7}, 1.0), Partition{{{0, 1, 2}}}).empty());
}

TEST_CASE("instance JSON round trip") {
  std::mt19937_64 g(23);
  for (int t = 0; t < 200; ++t) {
    Instance inst;
    inst.params = {std::ldexp(static_cast<double>(g() % 1000 + 1), -7), 1.0 + (g() % 4000 + 1) / 1000.0,
                   (g() % 10000 + 1) / 997.0};
    if (g() % 2) inst.resources.capacity = (g() % 5000 + 1) / 1000.0;
    if (g() % 2) inst.resources.machines = g() % 9 + 1;
    for (std::size_t i = 0, n = g() % 10; i < n; ++i) {
      inst.loads.push_back(unit_from_bits(g()) * 3.0 + 1e-9);
    }
    CHECK(parse_instance(serialize(inst)) == inst);
  }
}

TEST_CASE("instance parsing") {
  const Instance inst = parse_instance(
      R"({"alpha": 3, "b": 2, "capacity": null, "machines": 2, "loads": [0.5, 1]})");
  CHECK(inst.params == PowerParams{1.0, 3.0, 2.0});
  CHECK_FALSE(inst.resources.capacity);
  CHECK(inst.resources.machines == std::size_t{2});
  CHECK(inst.loads == std::vector<double>{0.5, 1.0});

  CHECK_FALSE(parse_instance(R"({"alpha": 2, "b": 1, "loads": []})").resources.machines);

  auto parse = [](const char* text) { return [=] { parse_instance(text); }; };
  CHECK(message_of(parse(R"({"alpha": 1.0, "b": 2, "loads": [1]})")) ==
        "field 'alpha': alpha must exceed 1");
  CHECK(code_of(parse(R"({"alpha": 3, "b": 0, "loads": [1]})")) == ErrorCode::kParse);
  CHECK(message_of(parse(R"({"alpha": 3, "b": 2, "loads": [1, -1]})")) ==
        "field 'loads[1]': load must be positive");
  CHECK(message_of(parse(R"({"alpha": 3, "b": 2, "machines": 1.5, "loads": [1]})"))
            .starts_with("field 'machines'"));
  CHECK(message_of(parse(R"({"b": 2, "loads": [1]})")) == "field 'alpha': missing");
  const std::string syntax = message_of(parse("{\n  \"alpha\": 3,\n  \"b\": }"));
  CHECK(syntax.find("line 3") != std::string::npos);
}

TEST_CASE("partition and stream files") {
  const Partition p{{{2, 0}, {1}}};
  CHECK(serialize(p) == "{\"groups\":[[3,1],[2]]}\n");
  CHECK(parse_partition(serialize(p)) == p);
  CHECK(code_of([] { parse_partition(R"({"groups": [[0]]})"); }) == ErrorCode::kParse);
  CHECK(parse_stream(R"({"loads": [0.3, 0.3]})") == std::vector<double>{0.3, 0.3});
  CHECK(code_of([] { parse_stream(R"({"loads": [0]})"); }) == ErrorCode::kParse);
}

TEST_CASE("canonical ordering") {
  const Partition p = canonical(Partition{{{4, 2}, {3, 0}, {1}}});
  CHECK(p == Partition{{{0, 3}, {1}, {2, 4}}});
}

TEST_CASE("gen_uniform") {
  const Instance a = gen_uniform(5, 0.1, 0.9, 7, {}, {});
  const Instance b = gen_uniform(5, 0.1, 0.9, 7, {}, {});
  CHECK(a == b);
  CHECK(instance_hash(a) == instance_hash(b));
  CHECK(a.size() == 5);
  for (double x : a.loads) {
    CHECK(x >= 0.1);
    CHECK(x < 0.9);
  }
  CHECK(gen_uniform(5, 0.1, 0.9, 8, {}, {}) != a);
  CHECK(code_of([] { gen_uniform(0, 0.1, 0.9, 7, {}, {}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { gen_uniform(3, 0.1, 2.0, 7, {}, Resources{1.0, {}}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { gen_uniform(3, 0.0, 2.0, 7, {}, {}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("unit_from_bits keeps the top 53 bits") {
  CHECK(unit_from_bits(0) == 0.0);
  CHECK(unit_from_bits(~std::uint64_t{0}) == 1.0 - std::ldexp(1.0, -53));
  CHECK(unit_from_bits(std::uint64_t{1} << 63) == 0.5);
  CHECK(unit_from_bits(0x7ff) == 0.0);
}

TEST_CASE("instance hashes") {
  const Instance a = make({0.5, 0.25});
  CHECK(instance_hash(a).size() == 16);
  CHECK(instance_hash(a) != instance_hash(make({0.25, 0.5})));
}

TEST_CASE("two-way split reduction") {
  const std::vector<double> sizes = {1, 1, 1, 1};
  const Instance inst = gen_partition_reduction(sizes, 3.0);
  CHECK(inst.resources.capacity == 2.0);
  CHECK(inst.params.b == 16.0);
  CHECK(inst.loads == sizes);
  CHECK(optimal_load(inst.params) == doctest::Approx(2.0).epsilon(1e-12));

  std::mt19937_64 g(29);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s(1 + g() % 6);
    for (auto& x : s) x = 0.1 + unit_from_bits(g()) * 5.0;
    const double alpha = 1.1 + unit_from_bits(g()) * 3.0;
    const Instance r = gen_partition_reduction(s, alpha);
    CHECK(optimal_load(r.params) == doctest::Approx(*r.resources.capacity).epsilon(1e-12));
  }
}

TEST_CASE("three-way split reduction") {
  const std::vector<std::int64_t> sizes = {3, 3, 2, 3, 3, 2};
  const auto r = gen_three_partition_reduction(sizes, 8, 2.0, ReductionVariant::kUnbounded);
  CHECK(r.instance.params.b == 64.0);
  CHECK(r.instance.loads == std::vector<double>{3, 3, 2, 3, 3, 2});
  CHECK_FALSE(r.instance.resources.capacity);
  CHECK(r.warnings.size() == 2);

  const auto c = gen_three_partition_reduction(sizes, 8, 2.0, ReductionVariant::kCapacity);
  CHECK(c.instance.resources.capacity == 8.0);
  const auto m = gen_three_partition_reduction(sizes, 8, 2.0, ReductionVariant::kMachines);
  CHECK(m.instance.resources.machines == std::size_t{2});

  const std::vector<std::int64_t> five = {3, 3, 2, 3, 3};
  CHECK(code_of([&] {
          gen_three_partition_reduction(five, 8, 2.0, ReductionVariant::kUnbounded);
        }) == ErrorCode::kInvalidArgument);
  const std::vector<std::int64_t> off = {3, 3, 3, 3, 3, 2};
  CHECK(code_of([&] {
          gen_three_partition_reduction(off, 8, 2.0, ReductionVariant::kUnbounded);
        }) == ErrorCode::kInvalidArgument);
}

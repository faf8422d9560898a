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

#include "vmassign/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "json.hpp"
#include "vmassign/error.hpp"
#include "vmassign/load_sum.hpp"

namespace vmassign {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void field_error(std::string_view field, std::string_view what) {
  throw Error(ErrorCode::kParse,
              "field '" + std::string(field) + "': " + std::string(what));
}

nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) field_error(key, "missing");
  const auto& v = j.at(key);
  if (!v.is_number()) field_error(key, "expected a number");
  return v.get<double>();
}

}  // namespace

void validate(const Instance& instance) {
  validate(instance.params);
  const auto& r = instance.resources;
  if (r.capacity && !(*r.capacity > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "capacity must be positive");
  }
  if (r.machines && *r.machines < 1) {
    throw Error(ErrorCode::kInvalidArgument, "machines must be at least 1");
  }
  for (std::size_t i = 0; i < instance.loads.size(); ++i) {
    const double x = instance.loads[i];
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "load " + std::to_string(i + 1) + " must be positive");
    }
  }
}

double total_load(const Instance& instance) {
  return accurate_sum(instance.loads);
}

Partition canonical(Partition p) {
  for (auto& g : p.groups) std::sort(g.begin(), g.end());
  std::sort(p.groups.begin(), p.groups.end(),
            [](const auto& a, const auto& b) {
              if (a.empty() || b.empty()) return a.size() < b.size();
              return a.front() < b.front();
            });
  return p;
}

std::vector<double> group_loads(const Instance& instance, const Partition& p) {
  std::vector<double> out;
  out.reserve(p.groups.size());
  for (const auto& g : p.groups) {
    LoadSum s;
    for (std::size_t i : g) s.add(instance.loads.at(i));
    out.push_back(s.value());
  }
  return out;
}

double partition_power(const Instance& instance, const Partition& p) {
  return power_of_loads(group_loads(instance, p), instance.params);
}

std::vector<Violation> validate(const Instance& instance, const Partition& p) {
  std::vector<Violation> out;
  const std::size_t n = instance.loads.size();
  std::vector<int> seen(n, 0);
  for (std::size_t g = 0; g < p.groups.size(); ++g) {
    const auto& group = p.groups[g];
    if (group.empty()) {
      out.push_back({Violation::Kind::kEmptyGroup, g,
                     "group " + std::to_string(g + 1) + " is empty"});
    }
    LoadSum load;
    for (std::size_t i : group) {
      if (i >= n) {
        out.push_back({Violation::Kind::kIndexOutOfRange, g,
                       "group " + std::to_string(g + 1) + " names VM " +
                           std::to_string(i + 1) + " which does not exist"});
        continue;
      }
      if (seen[i]++ > 0) {
        out.push_back({Violation::Kind::kDuplicateIndex, g,
                       "VM " + std::to_string(i + 1) + " appears again in group " +
                           std::to_string(g + 1)});
      }
      load.add(instance.loads[i]);
    }
    if (!fits_capacity(load.value(), instance.resources.capacity)) {
      out.push_back({Violation::Kind::kCapacity, g,
                     "group " + std::to_string(g + 1) + " load " +
                         std::to_string(load.value()) + " exceeds capacity " +
                         std::to_string(*instance.resources.capacity)});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i] == 0) {
      out.push_back({Violation::Kind::kMissingIndex, 0,
                     "VM " + std::to_string(i + 1) + " is not assigned"});
    }
  }
  const auto& m = instance.resources.machines;
  if (m && p.groups.size() > *m) {
    out.push_back({Violation::Kind::kMachineCount, 0,
                   std::to_string(p.groups.size()) + " machines used, only " +
                       std::to_string(*m) + " available"});
  }
  return out;
}

std::string serialize(const Instance& instance) {
  ordered_json j;
  j["mu"] = instance.params.mu;
  j["alpha"] = instance.params.alpha;
  j["b"] = instance.params.b;
  const auto& r = instance.resources;
  j["capacity"] = r.capacity ? ordered_json(*r.capacity) : ordered_json(nullptr);
  j["machines"] = r.machines ? ordered_json(*r.machines) : ordered_json(nullptr);
  j["loads"] = instance.loads;
  return j.dump() + "\n";
}

Instance parse_instance(std::string_view text) {
  const nlohmann::json j = parse_json(text);
  if (!j.is_object()) throw Error(ErrorCode::kParse, "instance must be a JSON object");

  Instance inst;
  if (j.contains("mu")) inst.params.mu = number_field(j, "mu");
  inst.params.alpha = number_field(j, "alpha");
  inst.params.b = number_field(j, "b");
  if (!(inst.params.alpha > 1.0)) field_error("alpha", "alpha must exceed 1");
  if (!(inst.params.b > 0.0)) field_error("b", "b must be positive");
  if (!(inst.params.mu > 0.0)) field_error("mu", "mu must be positive");

  if (j.contains("capacity") && !j["capacity"].is_null()) {
    const double c = number_field(j, "capacity");
    if (!(c > 0.0)) field_error("capacity", "capacity must be positive");
    inst.resources.capacity = c;
  }
  if (j.contains("machines") && !j["machines"].is_null()) {
    const auto& v = j["machines"];
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
      field_error("machines", "expected a positive integer or null");
    }
    inst.resources.machines = v.get<std::size_t>();
  }

  if (!j.contains("loads") || !j["loads"].is_array()) {
    field_error("loads", "expected an array of numbers");
  }
  const auto& loads = j["loads"];
  for (std::size_t i = 0; i < loads.size(); ++i) {
    const std::string where = "loads[" + std::to_string(i) + "]";
    if (!loads[i].is_number()) field_error(where, "expected a number");
    const double x = loads[i].get<double>();
    if (!(x > 0.0)) field_error(where, "load must be positive");
    inst.loads.push_back(x);
  }
  return inst;
}

std::string serialize(const Partition& p) {
  ordered_json groups = ordered_json::array();
  for (const auto& g : p.groups) {
    ordered_json row = ordered_json::array();
    for (std::size_t i : g) row.push_back(i + 1);
    groups.push_back(std::move(row));
  }
  ordered_json j;
  j["groups"] = std::move(groups);
  return j.dump() + "\n";
}

Partition parse_partition(std::string_view text) {
  const nlohmann::json j = parse_json(text);
  if (!j.is_object() || !j.contains("groups") || !j["groups"].is_array()) {
    field_error("groups", "expected an array of index arrays");
  }
  Partition p;
  for (const auto& row : j["groups"]) {
    if (!row.is_array()) field_error("groups", "expected an array of index arrays");
    auto& g = p.groups.emplace_back();
    for (const auto& v : row) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        field_error("groups", "VM indices are 1-based positive integers");
      }
      g.push_back(v.get<std::size_t>() - 1);
    }
  }
  return p;
}

std::vector<double> parse_stream(std::string_view text) {
  const nlohmann::json j = parse_json(text);
  if (!j.is_object() || !j.contains("loads") || !j["loads"].is_array()) {
    field_error("loads", "expected an array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j["loads"].size(); ++i) {
    const auto& v = j["loads"][i];
    const std::string where = "loads[" + std::to_string(i) + "]";
    if (!v.is_number()) field_error(where, "expected a number");
    if (!(v.get<double>() > 0.0)) field_error(where, "load must be positive");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string instance_hash(const Instance& instance) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize(instance)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

Instance gen_uniform(std::size_t n, double lo, double hi, std::uint64_t seed,
                     const PowerParams& params, const Resources& resources) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be at least 1");
  if (!(lo > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lo must be positive");
  if (!(hi >= lo)) throw Error(ErrorCode::kInvalidArgument, "hi must be at least lo");
  if (resources.capacity && hi > *resources.capacity) {
    throw Error(ErrorCode::kInvalidArgument,
                "hi exceeds capacity; generated VMs could not be placed");
  }
  Instance inst{params, resources, {}};
  validate(inst);
  std::mt19937_64 gen(seed);
  inst.loads.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    inst.loads.push_back(lo + (hi - lo) * unit_from_bits(gen()));
  }
  return inst;
}

Instance gen_partition_reduction(std::span<const double> sizes, double alpha) {
  if (sizes.empty()) throw Error(ErrorCode::kInvalidArgument, "sizes must be non-empty");
  if (!(alpha > 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must exceed 1");
  const double half = accurate_sum(sizes) / 2.0;
  Instance inst;
  inst.params = {1.0, alpha, std::pow(half, alpha) * (alpha - 1.0)};
  inst.resources.capacity = half;
  inst.loads.assign(sizes.begin(), sizes.end());
  validate(inst);
  return inst;
}

ReductionResult gen_three_partition_reduction(
    std::span<const std::int64_t> sizes, std::int64_t target, double alpha,
    ReductionVariant variant) {
  if (sizes.empty() || sizes.size() % 3 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "3-partition needs 3k sizes, got " + std::to_string(sizes.size()));
  }
  if (target <= 0) throw Error(ErrorCode::kInvalidArgument, "B must be positive");
  if (!(alpha > 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must exceed 1");
  const std::size_t k = sizes.size() / 3;
  const std::int64_t sum = std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
  if (sum != static_cast<std::int64_t>(k) * target) {
    throw Error(ErrorCode::kInvalidArgument,
                "sizes sum to " + std::to_string(sum) + ", expected k*B = " +
                    std::to_string(static_cast<std::int64_t>(k) * target));
  }

  ReductionResult out;
  auto& inst = out.instance;
  const double B = static_cast<double>(target);
  inst.params = {1.0, alpha, std::pow(B, alpha) * (alpha - 1.0)};
  switch (variant) {
    case ReductionVariant::kUnbounded: break;
    case ReductionVariant::kCapacity: inst.resources.capacity = B; break;
    case ReductionVariant::kMachines: inst.resources.machines = k; break;
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::int64_t s = sizes[i];
    if (s <= 0) throw Error(ErrorCode::kInvalidArgument, "sizes must be positive");
    // B/4 < s < B/2, compared in integers.
    if (!(4 * s > target && 2 * s < target)) {
      out.warnings.push_back("size " + std::to_string(s) + " at position " +
                             std::to_string(i + 1) + " lies outside (B/4, B/2)");
    }
    inst.loads.push_back(static_cast<double>(s));
  }
  return out;
}

}  // namespace vmassign

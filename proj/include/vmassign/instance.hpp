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

#ifndef VMASSIGN_INSTANCE_HPP
#define VMASSIGN_INSTANCE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmassign/power_model.hpp"

namespace vmassign {

// Relative slack for capacity checks. A machine filled to exactly C by
// decimal loads (0.1 + 0.2 + 0.7) must not be reported as overloaded.
inline constexpr double kCapacityTolerance = 1e-12;

/// Capacity C and machine count m; std::nullopt means unbounded.
struct Resources {
  std::optional<double> capacity;
  std::optional<std::size_t> machines;

  friend bool operator==(const Resources&, const Resources&) = default;
};

inline bool fits_capacity(double load, const std::optional<double>& capacity) {
  return !capacity || load <= *capacity * (1.0 + kCapacityTolerance);
}

struct Instance {
  PowerParams params;
  Resources resources;
  std::vector<double> loads;

  std::size_t size() const { return loads.size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Throws Error(kInvalidArgument) on bad parameters, resources or loads.
void validate(const Instance& instance);

double total_load(const Instance& instance);

/// Assignment of VM indices (0-based) to machines, one vector per busy
/// machine. The file format uses 1-based indices.
struct Partition {
  std::vector<std::vector<std::size_t>> groups;

  std::size_t machines() const { return groups.size(); }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Sorts indices inside each group and orders groups by their first index.
Partition canonical(Partition p);

std::vector<double> group_loads(const Instance& instance, const Partition& p);
double partition_power(const Instance& instance, const Partition& p);

struct Violation {
  enum class Kind {
    kIndexOutOfRange,
    kDuplicateIndex,
    kMissingIndex,
    kEmptyGroup,
    kCapacity,
    kMachineCount,
  };
  Kind kind;
  std::size_t group;  // 0-based offending group; 0 for whole-partition issues
  std::string message;
};

/// Empty iff p is a partition of the instance's VMs that respects C and m.
std::vector<Violation> validate(const Instance& instance, const Partition& p);

// JSON files: see README for the schema.
std::string serialize(const Instance& instance);
Instance parse_instance(std::string_view text);
std::string serialize(const Partition& p);
Partition parse_partition(std::string_view text);
std::vector<double> parse_stream(std::string_view text);

/// FNV-1a over the serialized instance, as 16 hex digits.
std::string instance_hash(const Instance& instance);

/// Deterministic uniform sample in [0, 1) from a 64-bit generator output:
/// the top 53 bits scaled by 2^-53. Shared by all generators so instances
/// reproduce across implementations of mt19937_64.
double unit_from_bits(std::uint64_t bits);

/// n loads i.i.d. uniform on [lo, hi] from std::mt19937_64 seeded by seed.
Instance gen_uniform(std::size_t n, double lo, double hi, std::uint64_t seed,
                     const PowerParams& params, const Resources& resources);

/// Capacity-bounded instance whose optimum reveals whether sizes splits into
/// two equal halves: C = sum/2, b = C^alpha (alpha - 1), so x* = C.
Instance gen_partition_reduction(std::span<const double> sizes, double alpha);

enum class ReductionVariant { kUnbounded, kCapacity, kMachines };

struct ReductionResult {
  Instance instance;
  std::vector<std::string> warnings;
};

/// Instance whose optimum equals k f(B) iff sizes admits a 3-partition with
/// target B: loads = sizes, b = B^alpha (alpha - 1), plus C = B or m = k
/// depending on variant. Sizes outside (B/4, B/2) only produce warnings.
ReductionResult gen_three_partition_reduction(
    std::span<const std::int64_t> sizes, std::int64_t target, double alpha,
    ReductionVariant variant);

}  // namespace vmassign

#endif  // VMASSIGN_INSTANCE_HPP

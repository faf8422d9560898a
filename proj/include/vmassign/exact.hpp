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

#ifndef VMASSIGN_EXACT_HPP
#define VMASSIGN_EXACT_HPP

#include <cstddef>
#include <cstdint>
#include <span>

#include "vmassign/instance.hpp"

namespace vmassign {

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

// Larger instances are refused outright with kBudgetExceeded.
inline constexpr std::size_t kMaxOracleItems = 20;

struct ExactResult {
  Partition partition;
  double power = 0.0;
  std::uint64_t nodes = 0;
};

/// Minimum-power partition respecting C and m, by depth-first enumeration of
/// restricted-growth strings over the VMs in input order.
///
/// Equal-power optima are resolved toward fewer machines, then toward the
/// lexicographically smallest restricted-growth string, so the answer is
/// unique. Groups are returned in order of first appearance.
///
/// Throws kInfeasible when no partition fits C and m, and kBudgetExceeded when
/// the search visits more than node_budget nodes or the instance has more than
/// kMaxOracleItems VMs.
ExactResult optimal_partition(const Instance& instance,
                              std::uint64_t node_budget = kDefaultNodeBudget);

/// Exact minimum bin count for the given item sizes.
/// Throws kOversizedItem if an item exceeds bin_size.
std::size_t min_bins(std::span<const double> loads, double bin_size,
                     std::uint64_t node_budget = kDefaultNodeBudget);

/// Whether some partition satisfies both C and m.
bool feasible(const Instance& instance);

}  // namespace vmassign

#endif  // VMASSIGN_EXACT_HPP

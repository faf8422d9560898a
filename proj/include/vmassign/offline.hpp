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

#ifndef VMASSIGN_OFFLINE_HPP
#define VMASSIGN_OFFLINE_HPP

#include <span>

#include "vmassign/instance.hpp"

namespace vmassign {

/// First-Fit-Decreasing: loads taken largest first (ties by index), each
/// into the lowest-indexed bin with room. Groups come back in opening order.
/// Throws kOversizedItem if some load exceeds bin_size.
Partition ffd_pack(std::span<const double> loads, double bin_size);

/// Capacity-bound packing for x* >= C: one machine when everything fits,
/// FFD into bins of size C otherwise.
/// Throws kOversizedItem, kMachinesExceeded, or kNotApplicable without C.
Partition solve_capacity(const Instance& instance);

/// Packing toward the optimal load for x* < C: VMs no larger than x* are
/// FFD-packed into bins of size x*, larger ones get a machine each.
/// Throws kRegimeMismatch when C <= x*; use solve_capacity there.
Partition solve_optimal_load(const Instance& instance);

/// solve_capacity when C is bounded and x* >= C, solve_optimal_load otherwise.
Partition solve_regime_matched(const Instance& instance);

/// Best LPT partition over every machine count k. Throws kInfeasible when no
/// k yields a partition within C.
Partition balanced_k(const Instance& instance);

/// Local search with best-improvement moves: merge two machines whose
/// combined load stays within min(x*, C), or move one VM to narrow the load
/// gap between two machines. Stops at a local optimum.
Partition local_improve(const Partition& partition, const Instance& instance);

}  // namespace vmassign

#endif  // VMASSIGN_OFFLINE_HPP

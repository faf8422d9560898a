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

#ifndef VMASSIGN_POWER_MODEL_HPP
#define VMASSIGN_POWER_MODEL_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace vmassign {

/// Cost-model constants of a physical machine: an active machine carrying
/// load x draws mu * x^alpha + b, an idle one draws nothing.
struct PowerParams {
  double mu = 1.0;
  double alpha = 3.0;
  double b = 2.0;

  friend bool operator==(const PowerParams&, const PowerParams&) = default;
};

/// Throws Error(kInvalidArgument) unless mu > 0, alpha > 1 and b > 0.
void validate(const PowerParams& p);

/// f(x): 0 for an idle machine, mu * x^alpha + b otherwise.
double machine_power(double load, const PowerParams& p);

/// Total power of a set of machines given their loads. Idle (zero-load)
/// entries contribute nothing. The per-machine terms are summed in sorted
/// order so the result does not depend on how the machines are listed.
double power_of_loads(std::span<const double> machine_loads,
                      const PowerParams& p);

/// Power of a partition given as explicit load groups.
double partition_power(const std::vector<std::vector<double>>& groups,
                       const PowerParams& p);

/// x* = (b / (mu (alpha - 1)))^(1/alpha), the load minimizing f(x)/x.
double optimal_load(const PowerParams& p);

/// phi* = f(x*) / x*, the least power any machine spends per unit of load.
double optimal_power_rate(const PowerParams& p);

/// f(a + c) - (f(a) + f(c)): negative when consolidating two machines saves
/// power, which is guaranteed once a + c <= x*.
double merge_delta(double a, double c, const PowerParams& p);

/// k b + k mu (L/k)^alpha. No partition with exactly k busy machines and
/// total load L draws less.
double balanced_lower_bound(std::size_t k, double total_load,
                            const PowerParams& p);

/// Minimum of balanced_lower_bound over k in [k_min, k_max].
/// The bound is convex in k, so only the integers around L/x* are checked.
double min_balanced_lower_bound(double total_load, const PowerParams& p,
                                std::size_t k_min, std::size_t k_max);

/// phi* L. Strictly below the power of any partition that has a busy
/// machine loaded to something other than x*.
double rate_lower_bound(double total_load, const PowerParams& p);

}  // namespace vmassign

#endif  // VMASSIGN_POWER_MODEL_HPP

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

#ifndef VMASSIGN_ONLINE_HPP
#define VMASSIGN_ONLINE_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmassign/instance.hpp"
#include "vmassign/load_sum.hpp"

namespace vmassign {

/// Loads of the machines opened so far, in opening order.
struct OnlineState {
  std::vector<double> loads;
  Resources resources;
  PowerParams params;
};

/// Where the next VM goes: an open machine (0-based) or a fresh one.
class Decision {
 public:
  static Decision new_machine() { return Decision(std::nullopt); }
  static Decision existing(std::size_t machine) { return Decision(machine); }

  bool is_new() const { return !machine_; }
  std::size_t machine() const { return *machine_; }

  friend bool operator==(const Decision&, const Decision&) = default;

 private:
  explicit Decision(std::optional<std::size_t> m) : machine_(m) {}
  std::optional<std::size_t> machine_;
};

using StepFn = std::function<Decision(const OnlineState&, double)>;

/// An online policy. Once placed, a VM never moves.
struct OnlineAlgorithm {
  std::string name;
  StepFn step;
  // The engine caps the machine count at this many slots when set.
  std::optional<std::size_t> machine_slots;
  bool requires_unbounded_capacity = false;
};

// Threshold-based policy for unbounded m: VMs above min(x*, C)/2 get their
// own machine, smaller ones join the lowest-indexed machine still loaded at
// most min(x*, C)/2, or open one when none is.
Decision alg1_step(const OnlineState& state, double load);

// Two-machine policy: machine 1 while load + l(A1) <= (b/(mu(2^alpha-2)))^(1/alpha)
// or l(A1) <= l(A2), machine 2 otherwise. Missing machines count as load 0.
Decision alg2_step(const OnlineState& state, double load);

// Cheapest power increment among legal choices; ties go to the lowest index,
// a new machine only when strictly cheaper. Throws kInfeasible if nothing is legal.
Decision greedy_step(const OnlineState& state, double load);

/// (b / (mu (2^alpha - 2)))^(1/alpha).
double alg2_threshold(const PowerParams& p);

OnlineAlgorithm make_alg1();
OnlineAlgorithm make_alg2();
OnlineAlgorithm make_greedy();

/// "alg1", "alg2" or "greedy"; throws kInvalidArgument otherwise.
OnlineAlgorithm algorithm_by_name(std::string_view name);

/// Applies decisions one VM at a time and rejects illegal ones with
/// kIllegalDecision instead of repairing them.
class StreamEngine {
 public:
  StreamEngine(const OnlineAlgorithm& algorithm, const PowerParams& params,
               const Resources& resources);

  Decision push(double load);

  const OnlineState& state() const { return state_; }
  const Partition& partition() const { return partition_; }
  const std::vector<Decision>& trace() const { return trace_; }
  const std::vector<double>& issued() const { return issued_; }
  std::size_t open_machines() const { return state_.loads.size(); }
  double power() const;

 private:
  const OnlineAlgorithm& algorithm_;
  OnlineState state_;
  std::vector<LoadSum> sums_;
  Partition partition_;
  std::vector<Decision> trace_;
  std::vector<double> issued_;
};

struct StreamResult {
  Partition partition;
  std::vector<Decision> trace;
  std::vector<double> machine_loads;
  double power = 0.0;
};

StreamResult run_stream(std::span<const double> loads, const OnlineAlgorithm& algorithm,
                        const PowerParams& params, const Resources& resources);

/// One JSON object per line: {"vm": i, "load": x, "target": j | "new"},
/// 1-based indices.
std::string trace_to_jsonl(std::span<const double> loads, std::span<const Decision> trace);

/// Checks that some VM is at least as large as the final load gap between the
/// two machines of a two-machine run. Vacuously true while the total load is
/// below twice alg2_threshold.
bool verify_claim1(std::span<const double> loads, std::span<const Decision> trace,
                   const PowerParams& params);

// ---------------------------------------------------------------------------
// Adaptive adversaries.

enum class OptMethod { kOracle, kClosedForm };

struct AdversaryReport {
  std::string construction;
  std::string algorithm;
  std::vector<double> issued_loads;
  Partition partition;
  std::vector<Decision> trace;
  double algorithm_power = 0.0;
  double optimal_power = 0.0;
  OptMethod opt_method = OptMethod::kOracle;
  double ratio = 0.0;
  double bound_value = 0.0;
  // What ratio is compared against to decide bound_met; equals bound_value
  // minus the tolerance except where a branch carries its own bound.
  double bound_threshold = 0.0;
  bool bound_met = false;
  std::string note;
};

/// Streams VMs of size eps * min(x*, C) until the algorithm opens a second
/// machine, or a safety cap is hit.
AdversaryReport adversary_threshold(const OnlineAlgorithm& algorithm,
                                    const PowerParams& params,
                                    std::optional<double> capacity, double eps);

/// m VMs of beta x*; if more than 3m/4 machines got used, m/2 more of 2 beta x*.
AdversaryReport adversary_m(const OnlineAlgorithm& algorithm, const PowerParams& params,
                            std::size_t m, double beta);

/// Two VMs of 6x*; if they were split, one more of 12x*. Runs with m = 2.
AdversaryReport adversary_two(const OnlineAlgorithm& algorithm, const PowerParams& params);

/// Upper bound on the number of VMs adversary_threshold issues.
std::size_t threshold_safety_cap(const PowerParams& params, double eps);

std::string to_json(const AdversaryReport& report);

}  // namespace vmassign

#endif  // VMASSIGN_ONLINE_HPP

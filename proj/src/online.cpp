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

#include "vmassign/online.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "vmassign/error.hpp"

namespace vmassign {

namespace {

double half_threshold(const OnlineState& state) {
  const double xstar = optimal_load(state.params);
  const auto& cap = state.resources.capacity;
  return (cap ? std::min(xstar, *cap) : xstar) / 2.0;
}

bool may_open(const OnlineState& state) {
  const auto& m = state.resources.machines;
  return !m || state.loads.size() < *m;
}

}  // namespace

Decision alg1_step(const OnlineState& state, double load) {
  const double t = half_threshold(state);
  if (load > t) return Decision::new_machine();
  for (std::size_t j = 0; j < state.loads.size(); ++j) {
    if (state.loads[j] <= t) return Decision::existing(j);
  }
  return Decision::new_machine();
}

double alg2_threshold(const PowerParams& p) {
  return std::pow(p.b / (p.mu * (std::pow(2.0, p.alpha) - 2.0)), 1.0 / p.alpha);
}

Decision alg2_step(const OnlineState& state, double load) {
  const double a1 = state.loads.size() > 0 ? state.loads[0] : 0.0;
  const double a2 = state.loads.size() > 1 ? state.loads[1] : 0.0;
  const std::size_t slot = (load + a1 <= alg2_threshold(state.params) || a1 <= a2) ? 0 : 1;
  if (slot < state.loads.size()) return Decision::existing(slot);
  return Decision::new_machine();
}

Decision greedy_step(const OnlineState& state, double load) {
  std::optional<Decision> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < state.loads.size(); ++j) {
    const double grown = state.loads[j] + load;
    if (!fits_capacity(grown, state.resources.capacity)) continue;
    const double cost = machine_power(grown, state.params) -
                        machine_power(state.loads[j], state.params);
    if (cost < best_cost) {
      best_cost = cost;
      best = Decision::existing(j);
    }
  }
  if (may_open(state) && machine_power(load, state.params) < best_cost) {
    best = Decision::new_machine();
  }
  if (!best) throw Error(ErrorCode::kInfeasible, "no machine can take the VM");
  return *best;
}

OnlineAlgorithm make_alg1() { return {"alg1", alg1_step, std::nullopt, false}; }
OnlineAlgorithm make_alg2() { return {"alg2", alg2_step, 2, true}; }
OnlineAlgorithm make_greedy() { return {"greedy", greedy_step, std::nullopt, false}; }

OnlineAlgorithm algorithm_by_name(std::string_view name) {
  if (name == "alg1") return make_alg1();
  if (name == "alg2") return make_alg2();
  if (name == "greedy") return make_greedy();
  throw Error(ErrorCode::kInvalidArgument,
              "unknown online algorithm '" + std::string(name) + "'");
}

StreamEngine::StreamEngine(const OnlineAlgorithm& algorithm, const PowerParams& params,
                           const Resources& resources)
    : algorithm_(algorithm) {
  validate(params);
  if (algorithm.requires_unbounded_capacity && resources.capacity) {
    throw Error(ErrorCode::kInvalidArgument,
                algorithm.name + " runs only without a capacity bound");
  }
  state_.params = params;
  state_.resources = resources;
  if (algorithm.machine_slots) {
    const std::size_t slots = *algorithm.machine_slots;
    state_.resources.machines =
        resources.machines ? std::min(*resources.machines, slots) : slots;
  }
}

Decision StreamEngine::push(double load) {
  if (!(load > 0.0)) throw Error(ErrorCode::kInvalidArgument, "loads must be positive");
  if (!fits_capacity(load, state_.resources.capacity)) {
    throw Error(ErrorCode::kOversizedItem, "load " + std::to_string(load) + " exceeds capacity");
  }
  const std::size_t vm = issued_.size();
  const Decision d = algorithm_.step(state_, load);
  const std::string who = algorithm_.name + " on VM " + std::to_string(vm + 1) + ": ";
  if (d.is_new()) {
    if (!may_open(state_)) {
      throw Error(ErrorCode::kIllegalDecision,
                  who + "opens machine " + std::to_string(state_.loads.size() + 1) +
                      " but only " + std::to_string(*state_.resources.machines) +
                      " are available");
    }
    sums_.emplace_back(load);
    state_.loads.push_back(load);
    partition_.groups.push_back({vm});
  } else {
    const std::size_t j = d.machine();
    if (j >= state_.loads.size()) {
      throw Error(ErrorCode::kIllegalDecision,
                  who + "targets machine " + std::to_string(j + 1) + " which is not open");
    }
    LoadSum grown = sums_[j];
    grown.add(load);
    if (!fits_capacity(grown.value(), state_.resources.capacity)) {
      throw Error(ErrorCode::kIllegalDecision,
                  who + "overloads machine " + std::to_string(j + 1));
    }
    sums_[j] = grown;
    state_.loads[j] = grown.value();
    partition_.groups[j].push_back(vm);
  }
  trace_.push_back(d);
  issued_.push_back(load);
  return d;
}

double StreamEngine::power() const { return power_of_loads(state_.loads, state_.params); }

StreamResult run_stream(std::span<const double> loads, const OnlineAlgorithm& algorithm,
                        const PowerParams& params, const Resources& resources) {
  StreamEngine engine(algorithm, params, resources);
  for (double x : loads) engine.push(x);
  return {engine.partition(), engine.trace(), engine.state().loads, engine.power()};
}

std::string trace_to_jsonl(std::span<const double> loads, std::span<const Decision> trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    nlohmann::ordered_json line;
    line["vm"] = i + 1;
    line["load"] = loads[i];
    if (trace[i].is_new()) {
      line["target"] = "new";
    } else {
      line["target"] = trace[i].machine() + 1;
    }
    out += line.dump();
    out += '\n';
  }
  return out;
}

bool verify_claim1(std::span<const double> loads, std::span<const Decision> trace,
                   const PowerParams& params) {
  if (loads.size() != trace.size()) {
    throw Error(ErrorCode::kInvalidArgument, "trace and loads differ in length");
  }
  std::vector<LoadSum> machines;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const std::size_t j = trace[i].is_new() ? machines.size() : trace[i].machine();
    if (j >= 2) throw Error(ErrorCode::kInvalidArgument, "not a two-machine trace");
    if (j == machines.size()) machines.emplace_back();
    machines[j].add(loads[i]);
  }
  if (accurate_sum(loads) < 2.0 * alg2_threshold(params)) return true;
  const double a1 = machines.size() > 0 ? machines[0].value() : 0.0;
  const double a2 = machines.size() > 1 ? machines[1].value() : 0.0;
  const double largest = *std::max_element(loads.begin(), loads.end());
  return largest >= std::fabs(a2 - a1);
}

}  // namespace vmassign

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

#include <cmath>
#include <exception>
#include <random>

#include <nlohmann/json.hpp>

#include "vmassign/load_sum.hpp"
#include "vmassign/offline.hpp"
#include "vmassign/online.hpp"
#include "vmassign/power_model.hpp"
#include "vmassign/ratio_lab.hpp"

namespace vmassign {

namespace {

bool is_online(std::string_view name) {
  return name == "alg1" || name == "alg2" || name == "greedy";
}

bool capacity_regime(const Instance& inst) {
  const auto& c = inst.resources.capacity;
  return c && optimal_load(inst.params) >= *c;
}

struct Bound {
  std::string name;
  double value;
};

// The upper bound an algorithm is held to on this instance, if any.
std::optional<Bound> applicable_bound(std::string_view algorithm, const Instance& inst,
                                      std::size_t opt_machines,
                                      std::uint64_t node_budget) {
  const PowerParams& p = inst.params;
  const double x_star = optimal_load(p);
  if (algorithm == "alg1") {
    if (capacity_regime(inst)) {
      return Bound{"alg1_capacity_ub",
                   alg1_capacity_bound(p, *inst.resources.capacity, total_load(inst))};
    }
    LoadSum small;
    for (double x : inst.loads) {
      if (x < x_star) small.add(x);
    }
    return Bound{"alg1_optimal_load_ub", alg1_optimal_load_bound(p, small.value())};
  }
  if (algorithm == "alg2") return Bound{"alg2_ub", alg2_bound(p, total_load(inst))};
  const bool offline = algorithm == "offline";
  if ((algorithm == "capacity" || offline) && capacity_regime(inst)) {
    const double c = *inst.resources.capacity;
    return Bound{"offline_capacity_ub",
                 offline_capacity_upper_bound(p, c, min_bins(inst.loads, c, node_budget))};
  }
  if ((algorithm == "optload" || offline) && !capacity_regime(inst)) {
    // The packing bound only covers VMs that fit in a bin of size x*.
    for (double x : inst.loads) {
      if (x > x_star) return std::nullopt;
    }
    return Bound{"offline_optimal_load_ub",
                 offline_optimal_load_upper_bound(
                     p, min_bins(inst.loads, x_star, node_budget), opt_machines)};
  }
  return std::nullopt;
}

void fail(ReportRow& row, const Error& e) {
  row.error = e.code();
  row.message = e.what();
}

std::string number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v).dump() : std::string();
}

}  // namespace

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names = {
      "alg1", "alg2", "greedy", "capacity", "optload", "offline", "balanced", "local"};
  return names;
}

Partition run_algorithm(std::string_view name, const Instance& instance) {
  if (is_online(name)) {
    if (name == "alg2" &&
        (instance.resources.capacity || instance.resources.machines != std::size_t{2})) {
      throw Error(ErrorCode::kNotApplicable, "alg2 runs only with m = 2 and unbounded C");
    }
    const OnlineAlgorithm alg = algorithm_by_name(name);
    return run_stream(instance.loads, alg, instance.params, instance.resources).partition;
  }
  if (name == "capacity") return solve_capacity(instance);
  if (name == "optload") return solve_optimal_load(instance);
  if (name == "offline") return solve_regime_matched(instance);
  if (name == "balanced") return balanced_k(instance);
  if (name == "local") return local_improve(balanced_k(instance), instance);
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

std::vector<ReportRow> evaluate_instance(std::size_t index, const Instance& instance,
                                         std::span<const std::string> algorithms,
                                         std::uint64_t node_budget) {
  ReportRow base;
  base.instance_index = index;
  base.instance_id = instance_hash(instance);
  base.n = instance.size();
  base.alpha = instance.params.alpha;
  base.b = instance.params.b;
  base.capacity = instance.resources.capacity;
  base.machines = instance.resources.machines;

  std::optional<ExactResult> opt;
  std::optional<Error> opt_error;
  try {
    opt = optimal_partition(instance, node_budget);
  } catch (const Error& e) {
    opt_error = e;
  }

  std::vector<ReportRow> rows;
  for (const auto& name : algorithms) {
    ReportRow row = base;
    row.algorithm = name;
    try {
      const Partition part = run_algorithm(name, instance);
      const auto violations = validate(instance, part);
      if (!violations.empty()) {
        throw Error(ErrorCode::kIllegalDecision, violations.front().message);
      }
      row.power = partition_power(instance, part);
      if (!opt) throw *opt_error;
      row.opt_power = opt->power;
      row.ratio = empirical_ratio(*row.power, opt->power);
      if (auto bound = applicable_bound(name, instance, opt->partition.machines(),
                                        node_budget)) {
        row.bound_name = bound->name;
        row.bound_value = bound->value;
        row.bound_ok = *row.ratio <= bound->value * (1.0 + kRatioTolerance);
      }
    } catch (const Error& e) {
      fail(row, e);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ReportRow> evaluate_batch_serial(std::span<const Instance> instances,
                                             std::span<const std::string> algorithms,
                                             std::uint64_t node_budget) {
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto r = evaluate_instance(i, instances[i], algorithms, node_budget);
    rows.insert(rows.end(), std::make_move_iterator(r.begin()),
                std::make_move_iterator(r.end()));
  }
  return rows;
}

std::vector<ReportRow> evaluate_batch(std::span<const Instance> instances,
                                      std::span<const std::string> algorithms,
                                      std::uint64_t node_budget) {
  const auto count = static_cast<std::ptrdiff_t>(instances.size());
  std::vector<std::vector<ReportRow>> per_instance(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      per_instance[k] = evaluate_instance(k, instances[k], algorithms, node_budget);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<ReportRow> rows;
  for (auto& r : per_instance) {
    rows.insert(rows.end(), std::make_move_iterator(r.begin()),
                std::make_move_iterator(r.end()));
  }
  return rows;
}

std::vector<Instance> generate_instances(const ExperimentConfig& config) {
  const UniformSpec& g = config.generator;
  if (g.n_min == 0 || g.n_min > g.n_max) {
    throw Error(ErrorCode::kInvalidArgument, "need 1 <= n_min <= n_max");
  }
  for (const auto& name : config.algorithms) {
    bool known = false;
    for (const auto& k : known_algorithms()) known = known || k == name;
    if (!known) {
      throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + name + "'");
    }
  }
  std::vector<Instance> out;
  out.reserve(config.trials);
  const double span = static_cast<double>(g.n_max - g.n_min + 1);
  for (std::size_t i = 0; i < config.trials; ++i) {
    std::mt19937_64 rng(config.seed + i);
    const auto n = g.n_min + static_cast<std::size_t>(std::floor(unit_from_bits(rng()) * span));
    out.push_back(gen_uniform(n, g.lo, g.hi, rng(), g.params, g.resources));
  }
  return out;
}

std::vector<ReportRow> run_experiment(const ExperimentConfig& config) {
  const auto instances = generate_instances(config);
  return evaluate_batch(instances, config.algorithms, config.node_budget);
}

std::vector<ReportRow> run_experiment_serial(const ExperimentConfig& config) {
  const auto instances = generate_instances(config);
  return evaluate_batch_serial(instances, config.algorithms, config.node_budget);
}

std::string to_csv(std::span<const ReportRow> rows) {
  std::string out(kCsvHeader);
  out += "\n";
  for (const auto& r : rows) {
    std::string ok;
    if (r.error) {
      ok = to_string(*r.error);
    } else if (r.bound_ok) {
      ok = *r.bound_ok ? "true" : "false";
    }
    out += r.instance_id + "," + std::to_string(r.n) + "," + number(r.alpha) + "," +
           number(r.b) + "," + number(r.capacity) + "," +
           (r.machines ? std::to_string(*r.machines) : std::string()) + "," + r.algorithm +
           "," + number(r.power) + "," + number(r.opt_power) + "," + number(r.ratio) + "," +
           r.bound_name + "," + number(r.bound_value) + "," + ok + "\n";
  }
  return out;
}

std::string to_jsonl(std::span<const ReportRow> rows) {
  std::string out;
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["instance_id"] = r.instance_id;
    j["n"] = r.n;
    j["alpha"] = r.alpha;
    j["b"] = r.b;
    j["capacity"] = opt(r.capacity);
    j["machines"] = r.machines ? nlohmann::ordered_json(*r.machines)
                               : nlohmann::ordered_json(nullptr);
    j["algorithm"] = r.algorithm;
    j["power"] = opt(r.power);
    j["opt_power"] = opt(r.opt_power);
    j["ratio"] = opt(r.ratio);
    j["bound_name"] = r.bound_name.empty() ? nlohmann::ordered_json(nullptr)
                                           : nlohmann::ordered_json(r.bound_name);
    j["bound_value"] = opt(r.bound_value);
    j["bound_ok"] = r.bound_ok ? nlohmann::ordered_json(*r.bound_ok)
                               : nlohmann::ordered_json(nullptr);
    if (r.error) {
      j["error"] = to_string(*r.error);
      j["message"] = r.message;
    }
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace vmassign

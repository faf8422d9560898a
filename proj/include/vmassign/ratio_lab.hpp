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

#ifndef VMASSIGN_RATIO_LAB_HPP
#define VMASSIGN_RATIO_LAB_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmassign/error.hpp"
#include "vmassign/exact.hpp"
#include "vmassign/instance.hpp"

namespace vmassign {

// Relative tolerance for ratio-vs-bound and ratio-vs-1 comparisons.
inline constexpr double kRatioTolerance = 1e-12;

// FFD uses at most (11/9) OPT + 1 bins, i.e. eps = 2/9 in the packing bounds.
inline constexpr double kFfdEpsilon = 2.0 / 9.0;

// ---------------------------------------------------------------------------
// Closed-form bounds. C^alpha terms are scaled by mu.

/// Offline inapproximability when C is bounded: (3/2)(alpha - 1 + (2/3)^alpha)/alpha.
double offline_partition_lower_bound(double alpha);
/// Bin packing at size C, x* >= C: 1 + eps + mu C^alpha / b + 1/m_bar.
double offline_capacity_upper_bound(const PowerParams& p, double capacity,
                                    std::size_t m_bar, double eps = kFfdEpsilon);
/// Bin packing at size x*, x* < C: (m_bar/m_star)(1 + eps + 1/(alpha-1)) + 1/m_star.
double offline_optimal_load_upper_bound(const PowerParams& p, std::size_t m_bar,
                                        std::size_t m_star, double eps = kFfdEpsilon);
/// ((3/2) 2^alpha - 1) / (2^alpha - 1), any online algorithm, C > x*.
double online_threshold_lower_bound(double alpha);
/// (mu C^alpha + 2b) / (b + max(mu C^alpha, 2 mu (C/2)^alpha + b)), C <= x*.
double online_small_capacity_lower_bound(const PowerParams& p, double capacity);
/// 3^alpha / (2^(alpha+2) + eps) with m machines.
double online_m_machines_lower_bound(double alpha, double eps);
/// 2^(alpha-3) + 1/4: what the m-machine construction guarantees when the
/// algorithm packs the first wave onto at most 3m/4 machines.
double online_m_machines_first_wave_bound(double alpha);
/// 3^alpha / 2^(alpha+1) with two machines.
double online_two_machines_lower_bound(double alpha);

/// 2 (1 - (1/alpha)(1 - 2^-alpha)); alg1's bound for x* < C reads
/// coefficient * (1 + x* / (2 l(D_s))).
double alg1_optimal_load_coefficient(double alpha);
/// 1 when no VM is below x*, else (1 - (1/alpha)(1 - 2^-alpha))(2 + x*/l(D_s)).
double alg1_optimal_load_bound(const PowerParams& p, double small_load);
/// (4b/C)(1 + 1/((alpha-1) 2^alpha)); alg1's bound for x* >= C reads
/// coefficient * (1 + C / (2 l(D))).
double alg1_capacity_coefficient(const PowerParams& p, double capacity);
/// (2b/C)(1 + 1/((alpha-1) 2^alpha))(2 + C/l(D)).
double alg1_capacity_bound(const PowerParams& p, double capacity, double total_load);
/// max(2, (3/2)^(alpha-1)).
double alg2_cap(double alpha);
/// 1 when the total load is at most alg2_threshold, alg2_cap otherwise.
double alg2_bound(const PowerParams& p, double total_load);

enum class BoundKind { kOfflineLower, kOfflineUpper, kOnlineLower, kOnlineUpper };
std::string_view to_string(BoundKind kind);

struct BoundEntry {
  std::string name;
  BoundKind kind;
  std::string regime;
  double value;
  std::string note;
};

struct BoundInputs {
  std::optional<std::size_t> m_bar;
  std::optional<std::size_t> m_star;
  std::optional<double> total_load;
  std::optional<double> small_load;
  double packing_eps = kFfdEpsilon;
  std::optional<double> m_machines_eps;
};

struct BoundsTable {
  std::vector<BoundEntry> entries;

  const BoundEntry* find(std::string_view name) const;
  /// Throws kNotApplicable when the entry was not emitted.
  double at(std::string_view name) const;
};

/// Every bound that applies to the regime fixed by (params, capacity) and
/// whose inputs are available.
BoundsTable bounds_table(const PowerParams& params, std::optional<double> capacity,
                         const BoundInputs& inputs = {});

std::string bounds_to_text(const BoundsTable& table);
std::string bounds_to_csv(const BoundsTable& table);

/// alg_power / opt_power; throws kOracleViolation when the algorithm beats the
/// optimum by more than kRatioTolerance.
double empirical_ratio(double alg_power, double opt_power);

// ---------------------------------------------------------------------------
// Batch experiments.

inline constexpr std::string_view kCsvHeader =
    "instance_id,n,alpha,b,capacity,machines,algorithm,power,opt_power,ratio,"
    "bound_name,bound_value,bound_ok";

/// Algorithm names accepted by the batch: alg1, alg2, greedy (online) and
/// capacity, optload, offline, balanced, local (offline; offline picks
/// capacity or optload by regime, local is local_improve after balanced).
const std::vector<std::string>& known_algorithms();

struct ReportRow {
  std::size_t instance_index = 0;
  std::string instance_id;
  std::size_t n = 0;
  double alpha = 0.0;
  double b = 0.0;
  std::optional<double> capacity;
  std::optional<std::size_t> machines;
  std::string algorithm;
  std::optional<double> power;
  std::optional<double> opt_power;
  std::optional<double> ratio;
  std::string bound_name;
  std::optional<double> bound_value;
  std::optional<bool> bound_ok;
  std::optional<ErrorCode> error;
  std::string message;
};

/// Runs one algorithm on an instance, returning the partition it builds.
Partition run_algorithm(std::string_view name, const Instance& instance);

/// One row per algorithm. Failures land in the row, never escape.
std::vector<ReportRow> evaluate_instance(std::size_t index, const Instance& instance,
                                         std::span<const std::string> algorithms,
                                         std::uint64_t node_budget = kDefaultNodeBudget);

/// Serial reference for evaluate_batch.
std::vector<ReportRow> evaluate_batch_serial(std::span<const Instance> instances,
                                             std::span<const std::string> algorithms,
                                             std::uint64_t node_budget = kDefaultNodeBudget);

/// OpenMP fan-out over instances; rows come back in instance order and match
/// evaluate_batch_serial exactly.
std::vector<ReportRow> evaluate_batch(std::span<const Instance> instances,
                                      std::span<const std::string> algorithms,
                                      std::uint64_t node_budget = kDefaultNodeBudget);

struct UniformSpec {
  std::size_t n_min = 1;
  std::size_t n_max = 8;
  double lo = 0.1;
  double hi = 1.0;
  PowerParams params;
  Resources resources;
};

struct ExperimentConfig {
  UniformSpec generator;
  std::vector<std::string> algorithms;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t node_budget = kDefaultNodeBudget;
};

/// Instance i draws its size and its loads from std::mt19937_64(seed + i).
std::vector<Instance> generate_instances(const ExperimentConfig& config);

std::vector<ReportRow> run_experiment(const ExperimentConfig& config);
std::vector<ReportRow> run_experiment_serial(const ExperimentConfig& config);

std::string to_csv(std::span<const ReportRow> rows);
std::string to_jsonl(std::span<const ReportRow> rows);

}  // namespace vmassign

#endif  // VMASSIGN_RATIO_LAB_HPP

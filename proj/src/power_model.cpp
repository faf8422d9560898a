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

#include "vmassign/power_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vmassign/error.hpp"
#include "vmassign/load_sum.hpp"

namespace vmassign {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kParse: return "PARSE_ERROR";
    case ErrorCode::kInfeasible: return "INFEASIBLE";
    case ErrorCode::kBudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::kOversizedItem: return "OVERSIZED_ITEM";
    case ErrorCode::kMachinesExceeded: return "MACHINES_EXCEEDED";
    case ErrorCode::kIllegalDecision: return "ILLEGAL_DECISION";
    case ErrorCode::kOracleViolation: return "ORACLE_VIOLATION";
    case ErrorCode::kRegimeMismatch: return "REGIME_MISMATCH";
    case ErrorCode::kNotApplicable: return "NOT_APPLICABLE";
  }
  return "UNKNOWN";
}

void validate(const PowerParams& p) {
  // Negated comparisons so NaN is rejected too.
  if (!(p.alpha > 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must exceed 1");
  }
  if (!(p.b > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "b must be positive");
  }
  if (!(p.mu > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "mu must be positive");
  }
}

double machine_power(double load, const PowerParams& p) {
  if (load == 0.0) return 0.0;
  return p.mu * std::pow(load, p.alpha) + p.b;
}

double power_of_loads(std::span<const double> machine_loads,
                      const PowerParams& p) {
  std::vector<double> terms;
  terms.reserve(machine_loads.size());
  for (double x : machine_loads) {
    if (x != 0.0) terms.push_back(machine_power(x, p));
  }
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

double partition_power(const std::vector<std::vector<double>>& groups,
                       const PowerParams& p) {
  std::vector<double> loads;
  loads.reserve(groups.size());
  for (const auto& g : groups) loads.push_back(accurate_sum(g));
  return power_of_loads(loads, p);
}

double optimal_load(const PowerParams& p) {
  return std::pow(p.b / (p.mu * (p.alpha - 1.0)), 1.0 / p.alpha);
}

double optimal_power_rate(const PowerParams& p) {
  const double x = optimal_load(p);
  return machine_power(x, p) / x;
}

double merge_delta(double a, double c, const PowerParams& p) {
  LoadSum s(a);
  s.add(c);
  return machine_power(s.value(), p) -
         (machine_power(a, p) + machine_power(c, p));
}

double balanced_lower_bound(std::size_t k, double total_load,
                            const PowerParams& p) {
  const double kd = static_cast<double>(k);
  return kd * p.b + kd * p.mu * std::pow(total_load / kd, p.alpha);
}

double min_balanced_lower_bound(double total_load, const PowerParams& p,
                                std::size_t k_min, std::size_t k_max) {
  k_min = std::max<std::size_t>(k_min, 1);
  if (k_max < k_min) k_max = k_min;
  const double center = total_load / optimal_load(p);
  const auto clamp = [&](double k) {
    if (k <= static_cast<double>(k_min)) return k_min;
    if (k >= static_cast<double>(k_max)) return k_max;
    return static_cast<std::size_t>(k);
  };
  const std::size_t lo = clamp(std::floor(center));
  const std::size_t hi = clamp(std::ceil(center));
  return std::min(balanced_lower_bound(lo, total_load, p),
                  balanced_lower_bound(hi, total_load, p));
}

double rate_lower_bound(double total_load, const PowerParams& p) {
  return optimal_power_rate(p) * total_load;
}

}  // namespace vmassign

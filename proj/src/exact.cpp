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

#include "vmassign/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "vmassign/error.hpp"
#include "vmassign/load_sum.hpp"

namespace vmassign {

namespace {

// Bounds may only prune nodes that are worse than the incumbent by more than
// rounding noise; ties must reach the leaf comparison.
constexpr double kPruneSlack = 1e-12;

[[noreturn]] void budget_exceeded(std::uint64_t budget) {
  throw Error(ErrorCode::kBudgetExceeded,
              "search exceeded the node budget of " + std::to_string(budget));
}

class PartitionSearch {
 public:
  PartitionSearch(const Instance& inst, std::uint64_t budget)
      : loads_(inst.loads),
        params_(inst.params),
        capacity_(inst.resources.capacity),
        max_machines_(inst.resources.machines.value_or(inst.loads.size())),
        budget_(budget),
        total_(accurate_sum(inst.loads)) {
    const std::size_t n = loads_.size();
    suffix_pow_.assign(n + 1, 0.0);
    suffix_load_.assign(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
      suffix_pow_[i] = suffix_pow_[i + 1] + params_.mu * std::pow(loads_[i], params_.alpha);
      suffix_load_[i] = suffix_load_[i + 1] + loads_[i];
    }
    rgs_.assign(n, 0);
  }

  ExactResult run() {
    descend(0);
    if (best_rgs_.empty() && !loads_.empty()) {
      throw Error(ErrorCode::kInfeasible, "no partition satisfies C and m");
    }
    ExactResult out;
    out.power = best_power_;
    out.nodes = nodes_;
    for (std::size_t i = 0; i < best_rgs_.size(); ++i) {
      const std::size_t g = best_rgs_[i];
      if (g == out.partition.groups.size()) out.partition.groups.emplace_back();
      out.partition.groups[g].push_back(i);
    }
    return out;
  }

 private:
  void descend(std::size_t i) {
    if (++nodes_ > budget_) budget_exceeded(budget_);
    const std::size_t n = loads_.size();
    if (i == n) {
      record_leaf();
      return;
    }
    const std::size_t used = groups_.size();
    const std::size_t last = used < max_machines_ ? used : used - 1;
    for (std::size_t t = 0; t <= last; ++t) {
      const bool open_new = (t == used);
      LoadSum next = open_new ? LoadSum() : groups_[t];
      next.add(loads_[i]);
      if (!fits_capacity(next.value(), capacity_)) continue;

      if (open_new) {
        groups_.push_back(next);
      } else {
        std::swap(groups_[t], next);  // next now holds the old sum
      }
      rgs_[i] = t;
      if (worth_descending(i + 1)) descend(i + 1);
      if (open_new) {
        groups_.pop_back();
      } else {
        groups_[t] = next;
      }
    }
  }

  bool worth_descending(std::size_t next_item) const {
    const std::size_t used = groups_.size();
    const std::size_t remaining = loads_.size() - next_item;

    if (capacity_) {
      double room = static_cast<double>(max_machines_ - used) * *capacity_;
      for (const auto& g : groups_) room += *capacity_ - g.value();
      if (suffix_load_[next_item] > room * (1.0 + kCapacityTolerance) + 1e-15) {
        return false;
      }
    }
    if (best_rgs_.empty()) return true;

    // Groups only grow and x^alpha is superadditive, so each remaining VM
    // adds at least mu * load^alpha wherever it lands.
    double current = 0.0;
    for (const auto& g : groups_) current += machine_power(g.value(), params_);
    const double by_items = current + suffix_pow_[next_item];
    const std::size_t k_max = std::min(max_machines_, used + remaining);
    const double by_balance = min_balanced_lower_bound(total_, params_, used, k_max);
    const double bound = std::max(by_items, by_balance);
    return !(bound > best_power_ * (1.0 + kPruneSlack));
  }

  void record_leaf() {
    std::vector<double> loads;
    loads.reserve(groups_.size());
    for (const auto& g : groups_) loads.push_back(g.value());
    const double power = power_of_loads(loads, params_);
    const bool better =
        best_rgs_.empty() || power < best_power_ ||
        (power == best_power_ && groups_.size() < best_groups_);
    if (better) {
      best_power_ = power;
      best_groups_ = groups_.size();
      best_rgs_ = rgs_;
    }
  }

  const std::vector<double>& loads_;
  const PowerParams params_;
  const std::optional<double> capacity_;
  const std::size_t max_machines_;
  const std::uint64_t budget_;
  const double total_;

  std::vector<double> suffix_pow_;
  std::vector<double> suffix_load_;
  std::vector<LoadSum> groups_;
  std::vector<std::size_t> rgs_;
  std::uint64_t nodes_ = 0;

  double best_power_ = std::numeric_limits<double>::infinity();
  std::size_t best_groups_ = 0;
  std::vector<std::size_t> best_rgs_;
};

std::size_t ffd_bin_count(std::span<const double> sorted_desc, double bin_size) {
  std::vector<LoadSum> bins;
  for (double x : sorted_desc) {
    bool placed = false;
    for (auto& b : bins) {
      LoadSum trial = b;
      trial.add(x);
      if (fits_capacity(trial.value(), bin_size)) {
        b = trial;
        placed = true;
        break;
      }
    }
    if (!placed) bins.emplace_back(x);
  }
  return bins.size();
}

class BinSearch {
 public:
  BinSearch(std::vector<double> items, double bin_size, std::size_t upper,
            std::size_t lower, std::uint64_t budget)
      : items_(std::move(items)),
        size_(bin_size),
        best_(upper),
        lower_(lower),
        budget_(budget) {
    suffix_.assign(items_.size() + 1, 0.0);
    for (std::size_t i = items_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + items_[i];
  }

  std::size_t run() {
    descend(0);
    return best_;
  }

 private:
  void descend(std::size_t i) {
    if (++nodes_ > budget_) budget_exceeded(budget_);
    if (best_ == lower_) return;
    if (i == items_.size()) {
      best_ = std::min(best_, bins_.size());
      return;
    }
    double free = 0.0;
    for (const auto& b : bins_) free += size_ - b.value();
    const double overflow = suffix_[i] - free;
    std::size_t extra = 0;
    if (overflow > size_ * kCapacityTolerance) {
      extra = static_cast<std::size_t>(std::ceil(overflow / size_ * (1.0 - kCapacityTolerance)));
    }
    if (bins_.size() + extra >= best_) return;

    std::vector<double> tried;
    for (std::size_t j = 0; j < bins_.size(); ++j) {
      const double before = bins_[j].value();
      if (std::find(tried.begin(), tried.end(), before) != tried.end()) continue;
      tried.push_back(before);
      LoadSum trial = bins_[j];
      trial.add(items_[i]);
      if (!fits_capacity(trial.value(), size_)) continue;
      const LoadSum saved = bins_[j];
      bins_[j] = trial;
      descend(i + 1);
      bins_[j] = saved;
      if (best_ == lower_) return;
    }
    if (bins_.size() + 1 < best_) {
      bins_.emplace_back(items_[i]);
      descend(i + 1);
      bins_.pop_back();
    }
  }

  const std::vector<double> items_;
  const double size_;
  std::size_t best_;
  const std::size_t lower_;
  const std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<double> suffix_;
  std::vector<LoadSum> bins_;
};

}  // namespace

ExactResult optimal_partition(const Instance& instance, std::uint64_t node_budget) {
  validate(instance);
  const std::size_t n = instance.loads.size();
  if (n == 0) return {};
  if (n > kMaxOracleItems) {
    throw Error(ErrorCode::kBudgetExceeded,
                "exact search is limited to " + std::to_string(kMaxOracleItems) +
                    " VMs, instance has " + std::to_string(n));
  }
  if (!feasible(instance)) {
    throw Error(ErrorCode::kInfeasible, "no partition satisfies C and m");
  }
  return PartitionSearch(instance, node_budget).run();
}

std::size_t min_bins(std::span<const double> loads, double bin_size,
                     std::uint64_t node_budget) {
  if (!(bin_size > 0.0)) throw Error(ErrorCode::kInvalidArgument, "bin size must be positive");
  std::vector<double> items(loads.begin(), loads.end());
  for (double x : items) {
    if (!fits_capacity(x, bin_size)) {
      throw Error(ErrorCode::kOversizedItem,
                  "item " + std::to_string(x) + " exceeds bin size " + std::to_string(bin_size));
    }
  }
  if (items.empty()) return 0;
  std::stable_sort(items.begin(), items.end(), std::greater<>());

  const std::size_t upper = ffd_bin_count(items, bin_size);
  const double ratio = accurate_sum(items) / bin_size;
  const std::size_t lower = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(ratio * (1.0 - kCapacityTolerance))));
  if (upper <= lower) return upper;
  return BinSearch(std::move(items), bin_size, upper, lower, node_budget).run();
}

bool feasible(const Instance& instance) {
  const auto& r = instance.resources;
  if (!r.capacity) return true;
  for (double x : instance.loads) {
    if (!fits_capacity(x, r.capacity)) return false;
  }
  if (!r.machines) return true;
  return min_bins(instance.loads, *r.capacity) <= *r.machines;
}

}  // namespace vmassign

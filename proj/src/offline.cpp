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

#include "vmassign/offline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "vmassign/error.hpp"
#include "vmassign/load_sum.hpp"

namespace vmassign {

namespace {

std::vector<std::size_t> decreasing_order(std::span<const double> loads) {
  std::vector<std::size_t> order(loads.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return loads[a] > loads[b]; });
  return order;
}

Partition single_machine(std::size_t n) {
  Partition p;
  if (n == 0) return p;
  auto& g = p.groups.emplace_back(n);
  std::iota(g.begin(), g.end(), std::size_t{0});
  return p;
}

void check_machine_count(const Partition& p, const Resources& r) {
  if (r.machines && p.machines() > *r.machines) {
    throw Error(ErrorCode::kMachinesExceeded,
                "packing needs " + std::to_string(p.machines()) + " machines, only " +
                    std::to_string(*r.machines) + " available");
  }
}

}  // namespace

Partition ffd_pack(std::span<const double> loads, double bin_size) {
  for (double x : loads) {
    if (!fits_capacity(x, bin_size)) {
      throw Error(ErrorCode::kOversizedItem,
                  "load " + std::to_string(x) + " exceeds bin size " + std::to_string(bin_size));
    }
  }
  Partition p;
  std::vector<LoadSum> fill;
  for (std::size_t i : decreasing_order(loads)) {
    std::size_t bin = 0;
    for (; bin < fill.size(); ++bin) {
      LoadSum trial = fill[bin];
      trial.add(loads[i]);
      if (fits_capacity(trial.value(), bin_size)) {
        fill[bin] = trial;
        break;
      }
    }
    if (bin == fill.size()) {
      fill.emplace_back(loads[i]);
      p.groups.emplace_back();
    }
    p.groups[bin].push_back(i);
  }
  for (auto& g : p.groups) std::sort(g.begin(), g.end());
  return p;
}

Partition solve_capacity(const Instance& instance) {
  validate(instance);
  const auto& cap = instance.resources.capacity;
  if (!cap) {
    throw Error(ErrorCode::kNotApplicable, "the capacity solver needs a bounded capacity");
  }
  for (double x : instance.loads) {
    if (!fits_capacity(x, cap)) {
      throw Error(ErrorCode::kOversizedItem,
                  "load " + std::to_string(x) + " exceeds capacity " + std::to_string(*cap));
    }
  }
  Partition p = fits_capacity(total_load(instance), cap)
                    ? single_machine(instance.size())
                    : ffd_pack(instance.loads, *cap);
  check_machine_count(p, instance.resources);
  return p;
}

Partition solve_optimal_load(const Instance& instance) {
  validate(instance);
  const auto& cap = instance.resources.capacity;
  const double xstar = optimal_load(instance.params);
  if (cap && !(xstar < *cap)) {
    throw Error(ErrorCode::kRegimeMismatch,
                "x* >= C; the optimal-load solver needs x* < C (use the capacity solver)");
  }
  for (double x : instance.loads) {
    if (!fits_capacity(x, cap)) {
      throw Error(ErrorCode::kOversizedItem,
                  "load " + std::to_string(x) + " exceeds capacity " + std::to_string(*cap));
    }
  }
  if (total_load(instance) <= xstar) {
    Partition p = single_machine(instance.size());
    check_machine_count(p, instance.resources);
    return p;
  }

  Partition p;
  std::vector<std::size_t> small;
  std::vector<double> small_loads;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (fits_capacity(instance.loads[i], xstar)) {
      small.push_back(i);
      small_loads.push_back(instance.loads[i]);
    } else {
      p.groups.push_back({i});
    }
  }
  for (auto& bin : ffd_pack(small_loads, xstar).groups) {
    for (auto& i : bin) i = small[i];
    p.groups.push_back(std::move(bin));
  }
  check_machine_count(p, instance.resources);
  return p;
}

Partition solve_regime_matched(const Instance& instance) {
  const auto& cap = instance.resources.capacity;
  if (cap && optimal_load(instance.params) >= *cap) return solve_capacity(instance);
  return solve_optimal_load(instance);
}

Partition balanced_k(const Instance& instance) {
  validate(instance);
  const std::size_t n = instance.size();
  if (n == 0) return {};
  const auto& cap = instance.resources.capacity;
  const std::size_t k_max = std::min(n, instance.resources.machines.value_or(n));
  const auto order = decreasing_order(instance.loads);

  std::optional<Partition> best;
  double best_power = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= k_max; ++k) {
    std::vector<LoadSum> fill(k);
    Partition p;
    p.groups.resize(k);
    std::vector<std::size_t> by_load(k);
    bool ok = true;
    for (std::size_t i : order) {
      std::iota(by_load.begin(), by_load.end(), std::size_t{0});
      std::stable_sort(by_load.begin(), by_load.end(), [&](std::size_t a, std::size_t b) {
        return fill[a].value() < fill[b].value();
      });
      auto target = std::find_if(by_load.begin(), by_load.end(), [&](std::size_t g) {
        LoadSum trial = fill[g];
        trial.add(instance.loads[i]);
        return fits_capacity(trial.value(), cap);
      });
      if (target == by_load.end()) {
        ok = false;
        break;
      }
      fill[*target].add(instance.loads[i]);
      p.groups[*target].push_back(i);
    }
    if (!ok) continue;
    for (auto& g : p.groups) std::sort(g.begin(), g.end());
    const double power = partition_power(instance, p);
    if (power < best_power) {
      best_power = power;
      best = std::move(p);
    }
  }
  if (!best) throw Error(ErrorCode::kInfeasible, "no machine count admits an LPT packing within C");
  return *best;
}

Partition local_improve(const Partition& partition, const Instance& instance) {
  const PowerParams& params = instance.params;
  const auto& cap = instance.resources.capacity;
  const double merge_limit =
      cap ? std::min(optimal_load(params), *cap) : optimal_load(params);
  const auto f = [&](double x) { return machine_power(x, params); };
  const auto load_of = [&](const std::vector<std::size_t>& g, std::size_t skip) {
    LoadSum s;
    for (std::size_t i : g) {
      if (i != skip) s.add(instance.loads[i]);
    }
    return s.value();
  };
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  Partition cur = partition;
  for (auto& g : cur.groups) std::sort(g.begin(), g.end());
  for (;;) {
    const std::size_t k = cur.groups.size();
    std::vector<double> load(k);
    for (std::size_t g = 0; g < k; ++g) load[g] = load_of(cur.groups[g], kNone);
    const double floor_gain = 1e-12 * power_of_loads(load, params);

    enum class Kind { kNone, kMerge, kMove } kind = Kind::kNone;
    double best_gain = floor_gain;
    std::size_t from = 0, to = 0, item = 0;

    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        LoadSum merged(load[i]);
        merged.add(load[j]);
        if (!(merged.value() <= merge_limit)) continue;
        const double gain = f(load[i]) + f(load[j]) - f(merged.value());
        if (gain > best_gain) {
          best_gain = gain;
          kind = Kind::kMerge;
          from = j;
          to = i;
        }
      }
    }
    for (std::size_t g = 0; g < k; ++g) {
      if (cur.groups[g].size() < 2) continue;
      for (std::size_t vm : cur.groups[g]) {
        const double rest = load_of(cur.groups[g], vm);
        for (std::size_t h = 0; h < k; ++h) {
          if (h == g) continue;
          LoadSum grown(load[h]);
          grown.add(instance.loads[vm]);
          if (!fits_capacity(grown.value(), cap)) continue;
          if (!(std::fabs(rest - grown.value()) < std::fabs(load[g] - load[h]))) continue;
          const double gain = f(load[g]) + f(load[h]) - f(rest) - f(grown.value());
          if (gain > best_gain) {
            best_gain = gain;
            kind = Kind::kMove;
            from = g;
            to = h;
            item = vm;
          }
        }
      }
    }

    if (kind == Kind::kNone) break;
    auto& dst = cur.groups[to];
    if (kind == Kind::kMerge) {
      dst.insert(dst.end(), cur.groups[from].begin(), cur.groups[from].end());
      std::sort(dst.begin(), dst.end());
      cur.groups.erase(cur.groups.begin() + static_cast<std::ptrdiff_t>(from));
    } else {
      auto& src = cur.groups[from];
      src.erase(std::find(src.begin(), src.end(), item));
      dst.insert(std::upper_bound(dst.begin(), dst.end(), item), item);
    }
  }
  return cur;
}

}  // namespace vmassign

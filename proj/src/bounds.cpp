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

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vmassign/online.hpp"
#include "vmassign/power_model.hpp"
#include "vmassign/ratio_lab.hpp"

namespace vmassign {

namespace {

std::string number(double v) { return nlohmann::json(v).dump(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

double offline_partition_lower_bound(double alpha) {
  return 1.5 * (alpha - 1.0 + std::pow(2.0 / 3.0, alpha)) / alpha;
}

double offline_capacity_upper_bound(const PowerParams& p, double capacity,
                                    std::size_t m_bar, double eps) {
  if (m_bar == 0) throw Error(ErrorCode::kInvalidArgument, "m_bar must be positive");
  return 1.0 + eps + p.mu * std::pow(capacity, p.alpha) / p.b +
         1.0 / static_cast<double>(m_bar);
}

double offline_optimal_load_upper_bound(const PowerParams& p, std::size_t m_bar,
                                        std::size_t m_star, double eps) {
  if (m_bar == 0 || m_star == 0) {
    throw Error(ErrorCode::kInvalidArgument, "m_bar and m_star must be positive");
  }
  const double ms = static_cast<double>(m_star);
  return (static_cast<double>(m_bar) / ms) * (1.0 + eps + 1.0 / (p.alpha - 1.0)) +
         1.0 / ms;
}

double online_threshold_lower_bound(double alpha) {
  const double t = std::pow(2.0, alpha);
  return (1.5 * t - 1.0) / (t - 1.0);
}

double online_small_capacity_lower_bound(const PowerParams& p, double capacity) {
  const double full = p.mu * std::pow(capacity, p.alpha);
  const double halves = 2.0 * p.mu * std::pow(capacity / 2.0, p.alpha) + p.b;
  return (full + 2.0 * p.b) / (p.b + std::max(full, halves));
}

double online_m_machines_lower_bound(double alpha, double eps) {
  return std::pow(3.0, alpha) / (std::pow(2.0, alpha + 2.0) + eps);
}

double online_m_machines_first_wave_bound(double alpha) {
  return std::pow(2.0, alpha - 3.0) + 0.25;
}

double online_two_machines_lower_bound(double alpha) {
  return std::pow(3.0, alpha) / std::pow(2.0, alpha + 1.0);
}

namespace {

double alg1_small_factor(double alpha) {
  return 1.0 - (1.0 / alpha) * (1.0 - std::pow(2.0, -alpha));
}

double alg1_capacity_factor(const PowerParams& p, double capacity) {
  return (2.0 * p.b / capacity) *
         (1.0 + 1.0 / ((p.alpha - 1.0) * std::pow(2.0, p.alpha)));
}

}  // namespace

double alg1_optimal_load_coefficient(double alpha) {
  return 2.0 * alg1_small_factor(alpha);
}

double alg1_optimal_load_bound(const PowerParams& p, double small_load) {
  if (small_load <= 0.0) return 1.0;
  return alg1_small_factor(p.alpha) * (2.0 + optimal_load(p) / small_load);
}

double alg1_capacity_coefficient(const PowerParams& p, double capacity) {
  return 2.0 * alg1_capacity_factor(p, capacity);
}

double alg1_capacity_bound(const PowerParams& p, double capacity, double total_load) {
  if (total_load <= 0.0) throw Error(ErrorCode::kInvalidArgument, "total load must be positive");
  return alg1_capacity_factor(p, capacity) * (2.0 + capacity / total_load);
}

double alg2_cap(double alpha) { return std::max(2.0, std::pow(1.5, alpha - 1.0)); }

double alg2_bound(const PowerParams& p, double total_load) {
  return total_load <= alg2_threshold(p) ? 1.0 : alg2_cap(p.alpha);
}

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kOfflineLower: return "offline-LB";
    case BoundKind::kOfflineUpper: return "offline-UB";
    case BoundKind::kOnlineLower: return "online-LB";
    case BoundKind::kOnlineUpper: return "online-UB";
  }
  return "?";
}

const BoundEntry* BoundsTable::find(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

double BoundsTable::at(std::string_view name) const {
  const BoundEntry* e = find(name);
  if (!e) {
    throw Error(ErrorCode::kNotApplicable, "no bound named '" + std::string(name) + "'");
  }
  return e->value;
}

BoundsTable bounds_table(const PowerParams& params, std::optional<double> capacity,
                         const BoundInputs& in) {
  validate(params);
  if (capacity && !(*capacity > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "capacity must be positive");
  }
  const double x_star = optimal_load(params);
  const bool capacity_regime = capacity && x_star >= *capacity;
  const std::string regime = capacity_regime ? "x* >= C" : "x* < C";

  BoundsTable t;
  auto add = [&](std::string name, BoundKind kind, std::string reg, double value,
                 std::string note = {}) {
    t.entries.push_back({std::move(name), kind, std::move(reg), value, std::move(note)});
  };

  add("offline_partition_lb", BoundKind::kOfflineLower, "bounded C",
      offline_partition_lower_bound(params.alpha),
      "no polynomial algorithm does better unless P = NP");
  if (capacity_regime) {
    if (in.m_bar) {
      add("offline_capacity_ub", BoundKind::kOfflineUpper, regime,
          offline_capacity_upper_bound(params, *capacity, *in.m_bar, in.packing_eps),
          "bin packing at size C, eps = " + number(in.packing_eps));
    }
    add("online_small_capacity_lb", BoundKind::kOnlineLower, regime,
        online_small_capacity_lower_bound(params, *capacity));
    add("alg1_capacity_coefficient", BoundKind::kOnlineUpper, regime,
        alg1_capacity_coefficient(params, *capacity),
        "alg1 ratio <= coefficient * (1 + C / (2 l(D)))");
    if (in.total_load) {
      add("alg1_capacity_ub", BoundKind::kOnlineUpper, regime,
          alg1_capacity_bound(params, *capacity, *in.total_load));
    }
  } else {
    if (in.m_bar && in.m_star) {
      add("offline_optimal_load_ub", BoundKind::kOfflineUpper, regime,
          offline_optimal_load_upper_bound(params, *in.m_bar, *in.m_star, in.packing_eps),
          "bin packing at size x*, eps = " + number(in.packing_eps));
    }
    add("online_threshold_lb", BoundKind::kOnlineLower, regime,
        online_threshold_lower_bound(params.alpha));
    add("alg1_optimal_load_coefficient", BoundKind::kOnlineUpper, regime,
        alg1_optimal_load_coefficient(params.alpha),
        "alg1 ratio <= coefficient * (1 + x* / (2 l(D_s)))");
    if (in.small_load) {
      add("alg1_optimal_load_ub", BoundKind::kOnlineUpper, regime,
          alg1_optimal_load_bound(params, *in.small_load),
          *in.small_load > 0.0 ? "" : "no VM below x*");
    }
  }
  if (in.m_machines_eps) {
    const double v = online_m_machines_lower_bound(params.alpha, *in.m_machines_eps);
    const double general = capacity_regime
                               ? online_small_capacity_lower_bound(params, *capacity)
                               : online_threshold_lower_bound(params.alpha);
    add("online_m_machines_lb", BoundKind::kOnlineLower, "bounded m", v,
        v < general ? "non-binding: below the general online bound" : "");
  }
  add("online_two_machines_lb", BoundKind::kOnlineLower, "m = 2",
      online_two_machines_lower_bound(params.alpha));
  add("alg2_cap", BoundKind::kOnlineUpper, "m = 2, unbounded C", alg2_cap(params.alpha));
  if (in.total_load) {
    add("alg2_ub", BoundKind::kOnlineUpper, "m = 2, unbounded C",
        alg2_bound(params, *in.total_load),
        *in.total_load <= alg2_threshold(params) ? "total load below threshold" : "");
  }
  return t;
}

std::string bounds_to_text(const BoundsTable& table) {
  std::size_t wn = 4, wk = 4, wr = 6;
  for (const auto& e : table.entries) {
    wn = std::max(wn, e.name.size());
    wk = std::max(wk, to_string(e.kind).size());
    wr = std::max(wr, e.regime.size());
  }
  std::ostringstream out;
  auto row = [&](std::string_view n, std::string_view k, std::string_view r,
                 std::string_view v, std::string_view note) {
    out << std::left << std::setw(static_cast<int>(wn)) << n << "  "
        << std::setw(static_cast<int>(wk)) << k << "  "
        << std::setw(static_cast<int>(wr)) << r << "  " << std::setw(20) << v;
    if (!note.empty()) out << "  " << note;
    out << "\n";
  };
  row("name", "kind", "regime", "value", "note");
  for (const auto& e : table.entries) {
    row(e.name, to_string(e.kind), e.regime, number(e.value), e.note);
  }
  std::string s = out.str();
  // Trailing spaces from the value column on rows without a note.
  std::string trimmed;
  std::istringstream lines(s);
  for (std::string line; std::getline(lines, line);) {
    line.erase(line.find_last_not_of(' ') + 1);
    trimmed += line + "\n";
  }
  return trimmed;
}

std::string bounds_to_csv(const BoundsTable& table) {
  std::string out = "name,kind,regime,value,note\n";
  for (const auto& e : table.entries) {
    out += csv_field(e.name) + "," + std::string(to_string(e.kind)) + "," +
           csv_field(e.regime) + "," + number(e.value) + "," + csv_field(e.note) + "\n";
  }
  return out;
}

double empirical_ratio(double alg_power, double opt_power) {
  if (!(alg_power > 0.0) || !(opt_power > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "powers must be positive");
  }
  if (alg_power < opt_power * (1.0 - kRatioTolerance)) {
    throw Error(ErrorCode::kOracleViolation,
                "algorithm power " + number(alg_power) + " is below the optimum " +
                    number(opt_power));
  }
  return alg_power / opt_power;
}

}  // namespace vmassign

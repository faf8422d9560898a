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

// Command-line driver: exact, solve, adversary, bounds, gen, stream, experiment.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vmassign/error.hpp"
#include "vmassign/exact.hpp"
#include "vmassign/instance.hpp"
#include "vmassign/offline.hpp"
#include "vmassign/online.hpp"
#include "vmassign/ratio_lab.hpp"

namespace {

using namespace vmassign;

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kInfeasibleExit = 2,
  kBudgetExit = 3,
  kBoundViolation = 4,
  kIllegalDecisionExit = 5,
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasible:
    case ErrorCode::kOversizedItem:
    case ErrorCode::kMachinesExceeded:
      return kInfeasibleExit;
    case ErrorCode::kBudgetExceeded: return kBudgetExit;
    case ErrorCode::kOracleViolation: return kBoundViolation;
    case ErrorCode::kIllegalDecision: return kIllegalDecisionExit;
    default: return kUsage;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  out << text;
}

// --alpha, --b, --mu, --capacity, --machines shared by several commands.
struct ModelFlags {
  double alpha = 3.0;
  double b = 2.0;
  double mu = 1.0;
  double capacity = 0.0;
  std::size_t machines = 0;
  CLI::Option* capacity_opt = nullptr;
  CLI::Option* machines_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--alpha", alpha, "exponent alpha > 1")->capture_default_str();
    app->add_option("--b", b, "static power b > 0")->capture_default_str();
    app->add_option("--mu", mu, "power scale mu > 0")->capture_default_str();
    capacity_opt = app->add_option("--capacity", capacity, "capacity C (omit = unbounded)");
    machines_opt = app->add_option("--machines", machines, "machine count m (omit = unbounded)");
  }

  PowerParams params() const {
    PowerParams p{mu, alpha, b};
    validate(p);
    return p;
  }

  std::optional<double> cap() const {
    if (capacity_opt->count() == 0) return std::nullopt;
    return capacity;
  }

  Resources resources() const {
    Resources r;
    r.capacity = cap();
    if (machines_opt->count() > 0) r.machines = machines;
    return r;
  }
};

std::string partition_json(const Partition& p, double power) {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(serialize(p));
  j["power"] = power;
  return j.dump() + "\n";
}

int cmd_exact(const std::string& file, std::uint64_t budget) {
  const Instance inst = parse_instance(read_file(file));
  validate(inst);
  const auto r = optimal_partition(inst, budget);
  std::cout << partition_json(r.partition, r.power);
  return kOk;
}

int cmd_solve(const std::string& file, const std::string& algorithm) {
  const Instance inst = parse_instance(read_file(file));
  validate(inst);
  Partition part;
  try {
    part = run_algorithm(algorithm, inst);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kRegimeMismatch) {
      std::cerr << "error: " << e.what() << "\nhint: x* >= C here, use --algorithm capacity\n";
      return kUsage;
    }
    if (e.code() == ErrorCode::kNotApplicable && algorithm == "capacity") {
      std::cerr << "error: " << e.what() << "\nhint: without C, use --algorithm optload\n";
      return kUsage;
    }
    throw;
  }
  std::cout << partition_json(part, partition_power(inst, part));
  if (inst.size() > 12) return kOk;
  const std::vector<std::string> algs = {algorithm};
  const auto rows = evaluate_instance(0, inst, algs);
  std::cout << to_csv(rows);
  if (rows[0].bound_ok == false) return kBoundViolation;
  return kOk;
}

int cmd_adversary(const std::string& construction, const std::string& algorithm,
                  const ModelFlags& model, double eps, double beta) {
  const OnlineAlgorithm alg = algorithm_by_name(algorithm);
  const PowerParams p = model.params();
  AdversaryReport r;
  if (construction == "threshold") {
    r = adversary_threshold(alg, p, model.cap(), eps);
  } else if (construction == "m") {
    const std::size_t m = model.machines_opt->count() ? model.machines : 8;
    r = adversary_m(alg, p, m, beta);
  } else {
    r = adversary_two(alg, p);
  }
  std::cout << to_json(r);
  return r.bound_met ? kOk : kBoundViolation;
}

struct BoundFlags {
  std::size_t m_bar = 0, m_star = 0;
  double total_load = 0.0, small_load = 0.0, packing_eps = kFfdEpsilon, m_eps = 0.0;
  CLI::Option *m_bar_opt, *m_star_opt, *total_opt, *small_opt, *m_eps_opt;
};

int cmd_bounds(const ModelFlags& model, const BoundFlags& f) {
  BoundInputs in;
  if (f.m_bar_opt->count()) in.m_bar = f.m_bar;
  if (f.m_star_opt->count()) in.m_star = f.m_star;
  if (f.total_opt->count()) in.total_load = f.total_load;
  if (f.small_opt->count()) in.small_load = f.small_load;
  if (f.m_eps_opt->count()) in.m_machines_eps = f.m_eps;
  in.packing_eps = f.packing_eps;
  const auto table = bounds_table(model.params(), model.cap(), in);
  std::cout << bounds_to_text(table) << "\n" << bounds_to_csv(table);
  return kOk;
}

struct GenFlags {
  std::vector<double> uniform;
  std::uint64_t seed = 0;
  std::vector<double> split_sizes;
  std::vector<std::int64_t> three_sizes;
  std::int64_t target = 0;
  std::string variant = "unbounded";
  std::string out;
};

int cmd_gen(const ModelFlags& model, const GenFlags& f) {
  Instance inst;
  if (!f.uniform.empty()) {
    if (f.uniform.size() != 3 || f.uniform[0] < 1 ||
        f.uniform[0] != static_cast<double>(static_cast<std::size_t>(f.uniform[0]))) {
      throw Error(ErrorCode::kInvalidArgument, "--uniform takes N LO HI with integer N >= 1");
    }
    inst = gen_uniform(static_cast<std::size_t>(f.uniform[0]), f.uniform[1], f.uniform[2],
                       f.seed, model.params(), model.resources());
  } else if (!f.split_sizes.empty()) {
    inst = gen_partition_reduction(f.split_sizes, model.alpha);
  } else if (!f.three_sizes.empty()) {
    const ReductionVariant v = f.variant == "capacity" ? ReductionVariant::kCapacity
                               : f.variant == "machines" ? ReductionVariant::kMachines
                                                         : ReductionVariant::kUnbounded;
    auto r = gen_three_partition_reduction(f.three_sizes, f.target, model.alpha, v);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    inst = std::move(r.instance);
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "choose one of --uniform, --split-reduction, --three-partition");
  }
  write_output(f.out, serialize(inst));
  return kOk;
}

int cmd_stream(const std::string& file, const std::string& algorithm, const ModelFlags& model) {
  const auto loads = parse_stream(read_file(file));
  const OnlineAlgorithm alg = algorithm_by_name(algorithm);
  const auto r = run_stream(loads, alg, model.params(), model.resources());
  nlohmann::ordered_json tail;
  tail["power"] = r.power;
  tail["machines"] = r.partition.machines();
  std::cout << trace_to_jsonl(loads, r.trace) << tail.dump() << "\n";
  return kOk;
}

struct ExperimentFlags {
  std::size_t trials = 100, n_min = 1, n_max = 8;
  double lo = 0.1, hi = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultNodeBudget;
  std::vector<std::string> algorithms = {"alg1", "offline", "balanced", "local"};
  std::string format = "csv";
  std::string out;
  bool serial = false;
};

int cmd_experiment(const ModelFlags& model, const ExperimentFlags& f) {
  ExperimentConfig cfg;
  cfg.generator = {f.n_min, f.n_max, f.lo, f.hi, model.params(), model.resources()};
  cfg.algorithms = f.algorithms;
  cfg.trials = f.trials;
  cfg.seed = f.seed;
  cfg.node_budget = f.budget;
  const auto rows = f.serial ? run_experiment_serial(cfg) : run_experiment(cfg);
  write_output(f.out, f.format == "jsonl" ? to_jsonl(rows) : to_csv(rows));
  for (const auto& r : rows) {
    if (r.bound_ok == false) return kBoundViolation;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power-minimizing VM assignment: solvers, adversaries, bounds"};
  app.require_subcommand(1);

  std::string file;
  std::uint64_t budget = kDefaultNodeBudget;
  auto* exact = app.add_subcommand("exact", "optimal partition by exhaustive search");
  exact->add_option("instance", file, "instance JSON file")->required();
  exact->add_option("--budget", budget, "search node budget")->capture_default_str();

  std::string solve_alg = "balanced";
  auto* solve = app.add_subcommand("solve", "run an offline heuristic");
  solve->add_option("instance", file, "instance JSON file")->required();
  solve->add_option("--algorithm", solve_alg)
      ->check(CLI::IsMember({"capacity", "optload", "balanced", "local"}))
      ->capture_default_str();

  ModelFlags adv_model, bounds_model, gen_model, stream_model, exp_model;
  std::string construction = "threshold", online_alg = "alg1";
  double eps = 0.01, beta = 2.0;
  auto* adversary = app.add_subcommand("adversary", "adaptive lower-bound input against an online algorithm");
  adversary->add_option("--construction", construction)
      ->check(CLI::IsMember({"threshold", "m", "two"}))
      ->capture_default_str();
  adversary->add_option("--algorithm", online_alg)
      ->check(CLI::IsMember({"alg1", "alg2", "greedy"}))
      ->capture_default_str();
  adversary->add_option("--eps", eps, "VM size as a fraction of min(x*, C)")->capture_default_str();
  adversary->add_option("--beta", beta, "first-wave VM size in units of x*")->capture_default_str();
  adv_model.attach(adversary);

  BoundFlags bf;
  auto* bounds = app.add_subcommand("bounds", "closed-form bounds for the given parameters");
  bounds_model.attach(bounds);
  bf.m_bar_opt = bounds->add_option("--m-bar", bf.m_bar, "minimum bin count");
  bf.m_star_opt = bounds->add_option("--m-star", bf.m_star, "machines in an optimal solution");
  bf.total_opt = bounds->add_option("--total-load", bf.total_load, "l(D)");
  bf.small_opt = bounds->add_option("--small-load", bf.small_load, "l(D_s), load of VMs below x*");
  bf.m_eps_opt = bounds->add_option("--m-eps", bf.m_eps, "eps of the m-machine bound");
  bounds->add_option("--packing-eps", bf.packing_eps, "bin packing slack")->capture_default_str();

  GenFlags gf;
  auto* gen = app.add_subcommand("gen", "write an instance file");
  gen_model.attach(gen);
  gen->add_option("--uniform", gf.uniform, "N LO HI")->expected(3);
  gen->add_option("--seed", gf.seed)->capture_default_str();
  gen->add_option("--split-reduction", gf.split_sizes, "sizes for the two-way split reduction");
  gen->add_option("--three-partition", gf.three_sizes, "sizes for the 3-partition reduction");
  gen->add_option("--target", gf.target, "3-partition target B");
  gen->add_option("--variant", gf.variant)
      ->check(CLI::IsMember({"unbounded", "capacity", "machines"}))
      ->capture_default_str();
  gen->add_option("--out", gf.out, "output file (default stdout)");

  auto* stream = app.add_subcommand("stream", "run an online algorithm over a stream file");
  stream->add_option("stream", file, "stream JSON file")->required();
  stream->add_option("--algorithm", online_alg)
      ->check(CLI::IsMember({"alg1", "alg2", "greedy"}))
      ->capture_default_str();
  stream_model.attach(stream);

  ExperimentFlags ef;
  auto* experiment = app.add_subcommand("experiment", "batch of random instances against the oracle");
  exp_model.attach(experiment);
  experiment->add_option("--trials", ef.trials)->capture_default_str();
  experiment->add_option("--seed", ef.seed)->capture_default_str();
  experiment->add_option("--n-min", ef.n_min)->capture_default_str();
  experiment->add_option("--n-max", ef.n_max)->capture_default_str();
  experiment->add_option("--lo", ef.lo)->capture_default_str();
  experiment->add_option("--hi", ef.hi)->capture_default_str();
  experiment->add_option("--budget", ef.budget)->capture_default_str();
  experiment->add_option("--algorithms", ef.algorithms)->delimiter(',')->capture_default_str();
  experiment->add_option("--format", ef.format)
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  experiment->add_option("--out", ef.out, "output file (default stdout)");
  experiment->add_flag("--serial", ef.serial, "skip the OpenMP fan-out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*exact) return cmd_exact(file, budget);
    if (*solve) return cmd_solve(file, solve_alg);
    if (*adversary) return cmd_adversary(construction, online_alg, adv_model, eps, beta);
    if (*bounds) return cmd_bounds(bounds_model, bf);
    if (*gen) return cmd_gen(gen_model, gf);
    if (*stream) return cmd_stream(file, online_alg, stream_model);
    if (*experiment) return cmd_experiment(exp_model, ef);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  }
  return kUsage;
}

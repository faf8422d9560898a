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

// Serial reference vs OpenMP batch evaluation on the same instances.

#include <vector>

#include <benchmark/benchmark.h>

#include "vmassign/ratio_lab.hpp"

namespace {

using namespace vmassign;

std::vector<Instance> batch(std::size_t n_max) {
  ExperimentConfig cfg;
  cfg.generator = {n_max, n_max, 0.05, 1.0, PowerParams{1.0, 3.0, 2.0}, Resources{2.0, {}}};
  cfg.trials = 64;
  cfg.seed = 99;
  return generate_instances(cfg);
}

const std::vector<std::string>& algorithms() {
  static const std::vector<std::string> names = {"alg1", "optload", "balanced", "local"};
  return names;
}

void BM_EvaluateSerial(benchmark::State& state) {
  const auto instances = batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_batch_serial(instances, algorithms()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(instances.size()));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto instances = batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_batch(instances, algorithms()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(instances.size()));
}

}  // namespace

BENCHMARK(BM_EvaluateSerial)->Arg(6)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluateParallel)->Arg(6)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

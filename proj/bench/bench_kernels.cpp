// Copyright 2026 The fibrecnot Authors
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

// Serial reference against the OpenMP kernels: bootstrap resampling and the coarse fit grid.

#include <benchmark/benchmark.h>

#include "fibrecnot/counts.hpp"
#include "fibrecnot/fit.hpp"

namespace fibrecnot {
namespace {

CountSet sample_counts() {
  GateParams p;
  p.overlap = 0.97;
  return synth_counts(model_truth_table(p, LogicalBasis::kZZ), 100000, 250.0, 1);
}

void BM_BootstrapSerial(benchmark::State& state) {
  const CountSet set = sample_counts();
  const TruthTable ideal = ideal_truth_table(LogicalBasis::kZZ);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bootstrap_fidelity_error_serial(set, LogicalBasis::kZZ, ideal, static_cast<std::size_t>(state.range(0)), 7));
  }
}

void BM_BootstrapParallel(benchmark::State& state) {
  const CountSet set = sample_counts();
  const TruthTable ideal = ideal_truth_table(LogicalBasis::kZZ);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bootstrap_fidelity_error(set, LogicalBasis::kZZ, ideal, static_cast<std::size_t>(state.range(0)), 7));
  }
}

// Similarity of the model against fixed tables over overlap and one eta value.
Objective model_objective() {
  GateParams truth;
  truth.overlap = 0.95;
  truth.eta.eta_4b = 0.47;
  const TruthTable zz = model_truth_table(truth, LogicalBasis::kZZ);
  const TruthTable xx = model_truth_table(truth, LogicalBasis::kXX);
  return [zz, xx](std::span<const double> x) {
    GateParams p;
    p.overlap = x[0];
    p.eta.eta_4b = x[1];
    return similarity(model_truth_table(p, LogicalBasis::kZZ), zz) *
           similarity(model_truth_table(p, LogicalBasis::kXX), xx);
  };
}

const Box kGridBox{{0.8, 0.35}, {1.0, 0.65}};

void BM_GridSerial(benchmark::State& state) {
  const Objective f = model_objective();
  for (auto _ : state) benchmark::DoNotOptimize(grid_search_serial(f, kGridBox, static_cast<std::size_t>(state.range(0))));
}

void BM_GridParallel(benchmark::State& state) {
  const Objective f = model_objective();
  for (auto _ : state) benchmark::DoNotOptimize(grid_search(f, kGridBox, static_cast<std::size_t>(state.range(0))));
}

BENCHMARK(BM_BootstrapSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridSerial)->Arg(5)->Arg(15)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Arg(5)->Arg(15)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace fibrecnot

BENCHMARK_MAIN();

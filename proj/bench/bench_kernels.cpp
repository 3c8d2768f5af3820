// Copyright 2026 The qsop-lab Authors
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

#include <benchmark/benchmark.h>

#include "qsop/kernels.hpp"
#include "qsop/metrics.hpp"
#include "qsop/scenario.hpp"

namespace {

using namespace qsop;

// A ladder of beam splitters over `modes` modes, truncated at `photons`.
ModeCircuit ladder(int modes, int photons) {
  std::vector<ModeLabel> labels;
  for (int i = 0; i < modes; ++i) labels.push_back({ModeKind::TimeBin, i, "m"});
  const ModeRegister reg(labels, photons);
  ModeCircuit c = ModeCircuit::identity(reg);
  for (int i = 0; i + 1 < modes; ++i) {
    c = compose(c, beam_splitter(reg, labels[i], labels[i + 1]));
    c = compose(c, phase_shifter(reg, labels[i], 0.3 * (i + 1)));
  }
  return c;
}

void BM_FockMatrixSerial(benchmark::State& state) {
  const auto c = ladder(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(fock_matrix_serial(c));
}

void BM_FockMatrixOmp(benchmark::State& state) {
  const auto c = ladder(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(fock_matrix_omp(c));
}

void BM_RoundsSerial(benchmark::State& state) {
  const auto b = build_model(builtin_scenario("trojan-pony"));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_rounds_serial(b.model));
}

void BM_RoundsOmp(benchmark::State& state) {
  const auto b = build_model(builtin_scenario("trojan-pony"));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_rounds_omp(b.model));
}

BENCHMARK(BM_FockMatrixSerial)->Args({6, 2})->Args({8, 2})->Args({6, 3});
BENCHMARK(BM_FockMatrixOmp)->Args({6, 2})->Args({8, 2})->Args({6, 3});
BENCHMARK(BM_RoundsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RoundsOmp)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

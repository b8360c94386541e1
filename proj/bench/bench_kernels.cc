// Copyright 2026 The promptbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "promptbench/kernels.hpp"
#include "promptbench/runner.hpp"
#include "promptbench/synth.hpp"

namespace pb = promptbench;
namespace kernels = promptbench::kernels;

namespace {

std::vector<std::uint8_t> random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(gen() & 1);
  return out;
}

template <auto Fn>
void BM_Confusion(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0)) * static_cast<std::size_t>(state.range(0));
  const auto pred = random_bits(n, 1);
  const auto gt = random_bits(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(pred, gt));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n * 2));
}

template <auto Fn>
void BM_CountNonzero(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0)) * static_cast<std::size_t>(state.range(0));
  const auto bits = random_bits(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(bits));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

template <auto Fn>
void BM_LabelMembership(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0)) * static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(4);
  std::vector<std::uint8_t> labels(n), out(n);
  for (auto& l : labels) l = static_cast<std::uint8_t>(gen() % 22);
  kernels::LabelTable table{};
  table[1] = table[7] = true;
  for (auto _ : state) {
    Fn(labels, table, out);
    benchmark::ClobberMemory();
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

// Whole-grid evaluation with the region-grow oracle; range(0) is the worker count.
void BM_Evaluate(benchmark::State& state) {
  static const auto patches = pb::synth::make_dataset(pb::synth::Morphology::kFine, 32, 128, 5, 4);
  std::vector<pb::StrategySpec> grid;
  for (const char* s : {"points:k=3", "points:k=50", "points+box:k=10", "box", "quad4", "centroid"}) {
    grid.push_back(pb::StrategySpec::parse(s));
  }
  pb::RunOptions options;
  options.workers = static_cast<int>(state.range(0));
  const auto factory = [] { return pb::make_backend(pb::BackendSpec::parse("oracle:regiongrow:tol=25")); };
  for (auto _ : state) benchmark::DoNotOptimize(pb::evaluate(patches, grid, factory, options));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * patches.size() * grid.size()));
}

}  // namespace

BENCHMARK(BM_Confusion<kernels::reference::confusion>)->Name("confusion/reference")->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_Confusion<kernels::confusion>)->Name("confusion/omp")->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_CountNonzero<kernels::reference::count_nonzero>)->Name("count_nonzero/reference")->Arg(1024)->Arg(4096);
BENCHMARK(BM_CountNonzero<kernels::count_nonzero>)->Name("count_nonzero/omp")->Arg(1024)->Arg(4096);
BENCHMARK(BM_LabelMembership<kernels::reference::label_membership>)->Name("label_membership/reference")->Arg(1024)->Arg(4096);
BENCHMARK(BM_LabelMembership<kernels::label_membership>)->Name("label_membership/omp")->Arg(1024)->Arg(4096);
BENCHMARK(BM_Evaluate)->Name("evaluate/workers")->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

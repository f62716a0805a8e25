// Copyright 2026 The graphpit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "graphpit/audio.h"
#include "graphpit/coloring.h"
#include "graphpit/overlap_graph.h"
#include "graphpit/pit.h"

namespace graphpit {
namespace {

// A chain of U utterances, each overlapping only its neighbours.
std::vector<UtteranceInterval> Chain(int u, std::int64_t step) {
  std::vector<UtteranceInterval> ivs;
  for (int i = 0; i < u; ++i) {
    ivs.push_back({i, i % 3, i * step, (i + 1) * step + step / 2});
  }
  return ivs;
}

Waveform Noise(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  FillStandardNormal(rng, v);
  return Waveform(std::move(v), 8000.0);
}

void BM_EnumerateColorings(benchmark::State& state) {
  const auto ivs = Chain(static_cast<int>(state.range(0)), 10);
  const OverlapGraph g = BuildOverlapGraph(ivs);
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) {
    ColoringEnumerator e(g, n);
    Coloring c;
    std::size_t count = 0;
    while (e.Next(c)) ++count;
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_EnumerateColorings)->Args({8, 2})->Args({8, 3})->Args({12, 3});

void BM_BruteForceColorings(benchmark::State& state) {
  const OverlapGraph g = BuildOverlapGraph(Chain(static_cast<int>(state.range(0)), 10));
  for (auto _ : state) {
    benchmark::DoNotOptimize(BruteForceColorings(g, 3));
  }
}
BENCHMARK(BM_BruteForceColorings)->Arg(6)->Arg(8);

SegmentTargets ChainTargets(std::mt19937_64& rng, int u, std::int64_t step) {
  std::vector<TargetUtterance> utts;
  for (const auto& iv : Chain(u, step)) {
    utts.push_back({iv, Noise(rng, static_cast<std::size_t>(iv.length()))});
  }
  return SegmentTargets(std::move(utts), (u + 1) * step, 8000.0);
}

// 4 s segments at 8 kHz.
void BM_GraphPitLoss(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int u = static_cast<int>(state.range(0));
  const std::int64_t step = 32000 / (u + 1);
  const SegmentTargets targets = ChainTargets(rng, u, step);
  std::vector<Waveform> c;
  for (int k = 0; k < 3; ++k) {
    c.push_back(Noise(rng, static_cast<std::size_t>(targets.length())));
  }
  const EstimateStreams est(std::move(c));
  const BaseLoss loss = TsdrBaseLoss(TsdrParams());
  for (auto _ : state) {
    benchmark::DoNotOptimize(GraphPitLoss(targets, est, loss).loss);
  }
}
BENCHMARK(BM_GraphPitLoss)->Arg(3)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_UpitLoss(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const SegmentTargets targets = ChainTargets(rng, 6, 32000 / 7);
  std::vector<Waveform> c;
  for (int k = 0; k < 3; ++k) {
    c.push_back(Noise(rng, static_cast<std::size_t>(targets.length())));
  }
  const EstimateStreams est(std::move(c));
  const BaseLoss loss = TsdrBaseLoss(TsdrParams());
  for (auto _ : state) {
    benchmark::DoNotOptimize(UpitLoss(targets, est, loss).loss);
  }
}
BENCHMARK(BM_UpitLoss)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace graphpit

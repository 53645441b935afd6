// Copyright 2026 The autocash Authors.
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


// Serial reference against OpenMP kernels: the kNN distance matrix, forest
// training and the reward sweep.

#include <benchmark/benchmark.h>

#include "autocash/cart.hpp"
#include "autocash/kernels.hpp"
#include "autocash/rewards.hpp"

namespace {

using namespace autocash;

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = uniform01(rng);
    return v;
}

void BM_Distances(benchmark::State& state, Exec exec) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::size_t dims = 16;
    const auto q = random_values(n * dims, 1);
    const auto r = random_values(4 * n * dims, 2);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::squared_distances(q, r, dims, exec));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * 4 * n));
}

void BM_Forest(benchmark::State& state, Exec exec) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    cart::FeatureMatrix x(rows, 8);
    x.values = random_values(rows * 8, 3);
    std::vector<int> y(rows);
    for (std::size_t i = 0; i < rows; ++i) y[i] = x.at(i, 0) + x.at(i, 1) > 1.0 ? 1 : 0;
    cart::ForestTrainParams p;
    p.trees = 100;
    p.tree.max_features = 3;
    p.exec = exec;
    for (auto _ : state) benchmark::DoNotOptimize(cart::fit_forest(x, y, 2, p));
}

void BM_Rewards(benchmark::State& state, Exec exec) {
    MetaDataset md;
    Rng rng(4);
    for (int i = 0; i < 40; ++i) {
        MetaRow row;
        row.dataset = "d" + std::to_string(i);
        for (auto& v : row.features.values) v = uniform01(rng);
        row.label = row.features.values[0] > 0.5 ? "a" : "b";
        md.rows.push_back(row);
    }
    RewardOptions o;
    o.repeats = 1;
    o.forest.trees = 20;
    o.exec = exec;
    for (auto _ : state) benchmark::DoNotOptimize(estimate_rewards(md, o));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Distances, serial, autocash::Exec::serial)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(BM_Distances, parallel, autocash::Exec::parallel)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(BM_Forest, serial, autocash::Exec::serial)->Arg(200);
BENCHMARK_CAPTURE(BM_Forest, parallel, autocash::Exec::parallel)->Arg(200);
BENCHMARK_CAPTURE(BM_Rewards, serial, autocash::Exec::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Rewards, parallel, autocash::Exec::parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

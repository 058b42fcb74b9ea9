/*
 * Copyright 2026 The finbank Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "finbank/estimators.hpp"
#include "finbank/selection.hpp"

namespace
{
finbank::PosteriorBatch make_batch(std::size_t m, std::size_t r, double alpha)
{
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<std::size_t> pick(0, r - 1);
    finbank::Matrix rows(m, r);
    for (std::size_t i = 0; i < m; ++i)
    {
        const finbank::AlphaPosterior q(pick(gen), r, alpha);
        std::copy(q.probs().begin(), q.probs().end(), rows.row(i).begin());
    }
    return finbank::PosteriorBatch(std::move(rows), alpha);
}

void BM_EstimateMi(benchmark::State& state)
{
    const auto batch = make_batch(static_cast<std::size_t>(state.range(0)), 25, 0.7);
    for (auto _ : state)
    {
        auto rep = finbank::estimate_mi(batch);
        benchmark::DoNotOptimize(rep.mi);
    }
}
BENCHMARK(BM_EstimateMi)->Arg(100)->Arg(1000)->Arg(10000);

void BM_BootstrapCi(benchmark::State& state)
{
    const auto batch = make_batch(1000, 25, 0.7);
    const auto threads = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
    {
        auto ci = finbank::bootstrap_ci(batch, 2000, 0.95, 1, threads);
        benchmark::DoNotOptimize(ci.first);
    }
}
BENCHMARK(BM_BootstrapCi)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
}  // namespace

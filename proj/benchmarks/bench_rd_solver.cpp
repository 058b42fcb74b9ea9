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

#include "finbank/bank_gen.hpp"
#include "finbank/rd_solver.hpp"

namespace
{
const finbank::Matrix& bench_losses()
{
    static const finbank::Matrix losses = [] {
        finbank::BankGenConfig cfg;
        cfg.num_experts = 25;
        cfg.num_pool = 2000;
        cfg.num_test = 2000;
        cfg.seed = 11;
        return finbank::gen_bank(cfg).test_losses();
    }();
    return losses;
}

void BM_BaSolve(benchmark::State& state)
{
    const double lambda = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state)
    {
        auto res = finbank::ba_solve(bench_losses(), lambda);
        benchmark::DoNotOptimize(res.point.lagrangian);
    }
}
BENCHMARK(BM_BaSolve)->Arg(2)->Arg(20)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_RdSweep(benchmark::State& state)
{
    const auto lambdas = finbank::log_grid(1e-3, 1e2, 12);
    const auto threads = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
    {
        auto points = finbank::rd_sweep(bench_losses(), lambdas, {}, threads);
        benchmark::DoNotOptimize(points.data());
    }
}
BENCHMARK(BM_RdSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
}  // namespace

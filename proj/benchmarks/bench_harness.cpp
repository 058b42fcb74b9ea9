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
#include "finbank/harness.hpp"

namespace
{
const finbank::ExpertBankDataset& bench_bank()
{
    static const finbank::ExpertBankDataset bank = [] {
        finbank::BankGenConfig cfg;
        cfg.num_pool = 5000;
        cfg.num_test = 2000;
        cfg.seed = 3;
        return finbank::gen_bank(cfg);
    }();
    return bank;
}

void BM_RunExperiment(benchmark::State& state)
{
    finbank::ExperimentConfig cfg;
    cfg.alpha = 0.7;
    cfg.m = 256;
    cfg.replicas = 500;
    cfg.master_seed = 1;
    cfg.bootstrap_resamples = 200;
    cfg.threads = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
    {
        auto rep = finbank::run_experiment(bench_bank(), cfg);
        benchmark::DoNotOptimize(rep.mean_gap);
    }
}
BENCHMARK(BM_RunExperiment)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
}  // namespace

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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "finbank/dataset.hpp"
#include "finbank/estimators.hpp"
#include "finbank/rng.hpp"

namespace finbank
{
/// One Monte Carlo replica: the sample's ERM winner, the drawn candidate and
/// its train/test errors.
struct ReplicaRecord
{
    std::size_t replica_index = 0;
    ExpertIndex winner = 0;
    ExpertIndex sampled = 0;
    double train_error = 0.0;
    double test_error = 0.0;
    double gap = 0.0;
};

struct GapHistogram
{
    std::vector<double> edges;  ///< bins + 1 edges
    std::vector<std::size_t> counts;
};

struct ExperimentReport
{
    ExperimentConfig config;
    std::size_t num_experts = 0;
    double mean_train = 0.0;
    double mean_test = 0.0;
    double mean_gap = 0.0;
    double mean_abs_gap = 0.0;
    MIReport mi_report;
    GapHistogram gap_histogram;
    std::vector<ReplicaRecord> replicas;
};

inline constexpr std::size_t kGapHistogramBins = 30;

/// Draws `m` distinct indices from [0, n) uniformly without replacement
/// (Floyd's algorithm); the result is sorted.
[[nodiscard]] std::vector<std::size_t> draw_sample(std::size_t n, std::size_t m, Rng& rng);

/// The replica's training sample: rows drawn from stream (seed, sample, i).
[[nodiscard]] SampleIndices replica_sample(const ExpertBankDataset& dataset,
                                           const ExperimentConfig& config, std::size_t replica);

/// `bins` equal-width bins spanning [min, max] of `values`; the top edge is
/// inclusive. A zero-width range is widened to +-0.5 around the value.
[[nodiscard]] GapHistogram make_histogram(std::span<const double> values, std::size_t bins);

[[nodiscard]] ExperimentReport run_experiment(const ExpertBankDataset& dataset,
                                              const ExperimentConfig& config);

/// Runs the experiment at every alpha on one shared set of replica samples
/// and winners; only the posterior and the drawn candidate vary with alpha.
/// config.alpha is ignored.
[[nodiscard]] std::vector<ExperimentReport> alpha_sweep(const ExpertBankDataset& dataset,
                                                        const ExperimentConfig& config,
                                                        std::span<const double> alphas);
}  // namespace finbank

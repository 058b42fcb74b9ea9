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

#include "finbank/harness.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_set>

#include "finbank/error.hpp"
#include "finbank/parallel.hpp"
#include "finbank/rng.hpp"
#include "finbank/selection.hpp"

namespace finbank
{
namespace
{
// Everything about a replica that does not depend on alpha.
struct SharedReplica
{
    std::vector<double> train_errors;  // per expert, over the replica's sample
    ExpertIndex winner = 0;
    double select_uniform = 0.0;
};

std::vector<SharedReplica> draw_replicas(const ExpertBankDataset& dataset,
                                         const ExperimentConfig& config)
{
    std::vector<SharedReplica> replicas(config.replicas);
    parallel_for(config.replicas, config.threads, [&](std::size_t i) {
        const SampleIndices sample = replica_sample(dataset, config, i);
        SharedReplica& rep = replicas[i];
        rep.train_errors = candidate_empirical_errors(dataset, sample);
        rep.winner = argmin_first(rep.train_errors);
        Rng select(config.master_seed, StreamTag::select, i);
        rep.select_uniform = select.uniform01();
    });
    return replicas;
}

ExperimentReport evaluate_alpha(const ExpertBankDataset& dataset, const ExperimentConfig& config,
                                const std::vector<SharedReplica>& shared)
{
    const std::size_t r = dataset.num_experts();
    const std::size_t m_rep = shared.size();
    const auto test_errors = dataset.test_errors();

    ExperimentReport report;
    report.config = config;
    report.num_experts = r;
    report.replicas.resize(m_rep);

    Matrix rows(m_rep, r);
    for (std::size_t i = 0; i < m_rep; ++i)
    {
        const AlphaPosterior posterior(shared[i].winner, r, config.alpha);
        std::copy(posterior.probs().begin(), posterior.probs().end(), rows.row(i).begin());

        ReplicaRecord& rec = report.replicas[i];
        rec.replica_index = i;
        rec.winner = shared[i].winner;
        rec.sampled = pick_index(posterior.probs(), shared[i].select_uniform);
        rec.train_error = shared[i].train_errors[rec.sampled];
        rec.test_error = test_errors[rec.sampled];
        rec.gap = rec.test_error - rec.train_error;
    }

    double sum_train = 0.0;
    double sum_test = 0.0;
    double sum_abs = 0.0;
    std::vector<double> gaps(m_rep);
    for (std::size_t i = 0; i < m_rep; ++i)
    {
        const ReplicaRecord& rec = report.replicas[i];
        sum_train += rec.train_error;
        sum_test += rec.test_error;
        sum_abs += std::abs(rec.gap);
        gaps[i] = rec.gap;
    }
    const auto count = static_cast<double>(m_rep);
    report.mean_train = sum_train / count;
    report.mean_test = sum_test / count;
    report.mean_gap = report.mean_test - report.mean_train;
    report.mean_abs_gap = sum_abs / count;
    report.gap_histogram = make_histogram(gaps, kGapHistogramBins);

    const PosteriorBatch batch(std::move(rows), config.alpha);
    MIReport& mi = report.mi_report;
    mi = estimate_mi(batch);
    mi.ci_level = config.ci_level;
    std::tie(mi.ci_low, mi.ci_high) = bootstrap_ci(batch, config.bootstrap_resamples,
                                                   config.ci_level, config.master_seed,
                                                   config.threads);
    mi.bound_clamped = mi.mi < 0.0;
    mi.bound_mi = mi_bound(mi.mi, config.m);
    mi.bound_union = union_bound(r, config.m);
    return report;
}
}  // namespace

std::vector<std::size_t> draw_sample(std::size_t n, std::size_t m, Rng& rng)
{
    detail::require(m >= 1 && m <= n, "sample size must lie in [1, n]");
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(m * 2);
    std::vector<std::size_t> out;
    out.reserve(m);
    for (std::size_t j = n - m; j < n; ++j)
    {
        const auto t = static_cast<std::size_t>(rng.below(j + 1));
        const std::size_t pick = chosen.contains(t) ? j : t;
        chosen.insert(pick);
        out.push_back(pick);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SampleIndices replica_sample(const ExpertBankDataset& dataset, const ExperimentConfig& config,
                             std::size_t replica)
{
    Rng rng(config.master_seed, StreamTag::sample, replica);
    return SampleIndices(draw_sample(dataset.num_pool(), config.m, rng), dataset.num_pool());
}

GapHistogram make_histogram(std::span<const double> values, std::size_t bins)
{
    detail::require(bins >= 1, "histogram needs at least one bin");
    detail::require(!values.empty(), "histogram of no values");
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (!(hi > lo))
    {
        lo -= 0.5;
        hi += 0.5;
    }
    GapHistogram hist;
    hist.edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t k = 0; k <= bins; ++k)
    {
        hist.edges[k] = lo + width * static_cast<double>(k);
    }
    hist.edges.back() = hi;
    hist.counts.assign(bins, 0);
    for (double v : values)
    {
        auto k = static_cast<std::size_t>((v - lo) / width);
        k = std::min(k, bins - 1);
        // Floating-point edges can disagree with the division by one bin.
        while (k > 0 && v < hist.edges[k])
        {
            --k;
        }
        while (k + 1 < bins && v >= hist.edges[k + 1])
        {
            ++k;
        }
        ++hist.counts[k];
    }
    return hist;
}

ExperimentReport run_experiment(const ExpertBankDataset& dataset, const ExperimentConfig& config)
{
    config.validate(dataset.num_pool());
    const auto shared = draw_replicas(dataset, config);
    return evaluate_alpha(dataset, config, shared);
}

std::vector<ExperimentReport> alpha_sweep(const ExpertBankDataset& dataset,
                                          const ExperimentConfig& config,
                                          std::span<const double> alphas)
{
    detail::require(!alphas.empty(), "alpha grid is empty");
    for (double a : alphas)
    {
        detail::require(a >= 0.0 && a <= 1.0, "alpha values must lie in [0,1]");
    }
    ExperimentConfig base = config;
    base.alpha = alphas.front();
    base.validate(dataset.num_pool());

    const auto shared = draw_replicas(dataset, base);
    std::vector<ExperimentReport> reports;
    reports.reserve(alphas.size());
    for (double a : alphas)
    {
        ExperimentConfig at = base;
        at.alpha = a;
        reports.push_back(evaluate_alpha(dataset, at, shared));
    }
    return reports;
}
}  // namespace finbank

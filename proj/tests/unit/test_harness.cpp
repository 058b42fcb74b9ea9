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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "finbank/bank_gen.hpp"
#include "finbank/error.hpp"
#include "finbank/selection.hpp"
#include "oracles.hpp"

namespace finbank
{
namespace
{
ExpertBankDataset test_bank(std::uint64_t seed = 3, std::size_t r = 8)
{
    BankGenConfig cfg;
    cfg.num_experts = r;
    cfg.num_pool = 2000;
    cfg.num_test = 1000;
    cfg.seed = seed;
    return gen_bank(cfg);
}

ExperimentConfig small_config(double alpha)
{
    ExperimentConfig cfg;
    cfg.alpha = alpha;
    cfg.m = 64;
    cfg.replicas = 120;
    cfg.master_seed = 5;
    cfg.bootstrap_resamples = 200;
    return cfg;
}

TEST(DrawSample, DistinctSortedInRange)
{
    Rng rng(1);
    for (std::size_t n : {1u, 2u, 10u, 1000u})
    {
        for (std::size_t m : {std::size_t{1}, n / 2 + 1, n})
        {
            const auto s = draw_sample(n, m, rng);
            ASSERT_EQ(s.size(), m);
            EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
            EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), m);
            EXPECT_LT(s.back(), n);
        }
    }
    EXPECT_THROW((void)draw_sample(3, 4, rng), ValidationError);
    EXPECT_THROW((void)draw_sample(3, 0, rng), ValidationError);
}

TEST(DrawSample, InclusionFrequenciesAreUniform)
{
    Rng rng(2);
    const std::size_t n = 10;
    const std::size_t m = 3;
    const int trials = 60000;
    std::vector<int> hits(n, 0);
    for (int t = 0; t < trials; ++t)
    {
        for (auto j : draw_sample(n, m, rng))
        {
            ++hits[j];
        }
    }
    const double p = 0.3;
    const double se = std::sqrt(p * (1 - p) / trials);
    for (int h : hits)
    {
        EXPECT_NEAR(static_cast<double>(h) / trials, p, 5 * se);
    }
}

TEST(ReplicaSample, DependsOnlyOnSeedAndIndex)
{
    const auto ds = test_bank();
    auto cfg = small_config(0.7);
    const auto a = replica_sample(ds, cfg, 17);
    cfg.alpha = 0.1;
    cfg.replicas = 999;
    const auto b = replica_sample(ds, cfg, 17);
    EXPECT_TRUE(std::equal(a.indices().begin(), a.indices().end(), b.indices().begin(),
                           b.indices().end()));
    const auto c = replica_sample(ds, cfg, 18);
    EXPECT_FALSE(std::equal(a.indices().begin(), a.indices().end(), c.indices().begin(),
                            c.indices().end()));
}

TEST(MakeHistogram, CountsAndEdges)
{
    const std::vector<double> v{0.0, 0.1, 0.2, 0.3, 1.0};
    const auto h = make_histogram(v, 10);
    ASSERT_EQ(h.edges.size(), 11u);
    ASSERT_EQ(h.counts.size(), 10u);
    EXPECT_EQ(h.edges.front(), 0.0);
    EXPECT_EQ(h.edges.back(), 1.0);
    std::size_t total = 0;
    for (auto c : h.counts)
    {
        total += c;
    }
    EXPECT_EQ(total, 5u);
    EXPECT_EQ(h.counts.back(), 1u);
    EXPECT_EQ(h.counts.front(), 1u);
    // Every value sits inside its bin.
    for (double x : v)
    {
        std::size_t k = 0;
        while (k + 1 < 10 && x >= h.edges[k + 1])
        {
            ++k;
        }
        EXPECT_GE(x, h.edges[k]);
        EXPECT_LE(x, h.edges[k + 1]);
    }
}

TEST(MakeHistogram, ZeroRangeIsWidened)
{
    const std::vector<double> v(7, 0.25);
    const auto h = make_histogram(v, 30);
    EXPECT_EQ(h.edges.front(), -0.25);
    EXPECT_EQ(h.edges.back(), 0.75);
    std::size_t total = 0;
    for (auto c : h.counts)
    {
        total += c;
    }
    EXPECT_EQ(total, 7u);
    EXPECT_THROW((void)make_histogram(std::vector<double>{}, 3), ValidationError);
    EXPECT_THROW((void)make_histogram(v, 0), ValidationError);
}

TEST(RunExperiment, ReportInvariants)
{
    const auto ds = test_bank();
    for (double alpha : {0.0, 0.4, 0.7, 1.0})
    {
        const auto rep = run_experiment(ds, small_config(alpha));
        ASSERT_EQ(rep.replicas.size(), 120u);
        EXPECT_NEAR(rep.mean_gap, rep.mean_test - rep.mean_train, 1e-12);
        EXPECT_GE(rep.mean_abs_gap, std::abs(rep.mean_gap) - 1e-15);
        std::size_t total = 0;
        for (auto c : rep.gap_histogram.counts)
        {
            total += c;
        }
        EXPECT_EQ(total, 120u);
        EXPECT_EQ(rep.gap_histogram.counts.size(), kGapHistogramBins);
        EXPECT_NEAR(rep.mi_report.h_w_given_s, alpha_mixture_entropy(alpha, 8), 1e-12);
        EXPECT_EQ(rep.mi_report.bound_union, union_bound(8, 64));
        EXPECT_EQ(rep.mi_report.ci_level, 0.95);
        for (const auto& rec : rep.replicas)
        {
            EXPECT_GE(rec.gap, -1.0);
            EXPECT_LE(rec.gap, 1.0);
            EXPECT_EQ(rec.gap, rec.test_error - rec.train_error);
            EXPECT_EQ(rec.test_error, ds.test_errors()[rec.sampled]);
            if (alpha == 1.0)
            {
                EXPECT_EQ(rec.sampled, rec.winner);
            }
        }
    }
}

TEST(RunExperiment, ReplicaRecordsMatchIndependentRecomputation)
{
    const auto ds = test_bank();
    const auto cfg = small_config(0.6);
    const auto rep = run_experiment(ds, cfg);
    for (std::size_t i = 0; i < cfg.replicas; i += 7)
    {
        Rng sample_rng(cfg.master_seed, StreamTag::sample, i);
        const auto rows = draw_sample(ds.num_pool(), cfg.m, sample_rng);
        const auto winner = oracle::brute_force_winner(ds.pool_losses(), rows);
        const auto& rec = rep.replicas[i];
        EXPECT_EQ(rec.winner, winner);
        Rng select_rng(cfg.master_seed, StreamTag::select, i);
        EXPECT_EQ(rec.sampled, sample_candidate(AlphaPosterior(winner, 8, 0.6), select_rng));
        double train = 0.0;
        for (auto j : rows)
        {
            train += ds.pool_losses()(j, rec.sampled);
        }
        EXPECT_NEAR(rec.train_error, train / static_cast<double>(cfg.m), 1e-15);
    }
}

TEST(RunExperiment, SingleReplicaHasZeroMi)
{
    const auto ds = test_bank();
    auto cfg = small_config(0.7);
    cfg.replicas = 1;
    const auto rep = run_experiment(ds, cfg);
    EXPECT_EQ(rep.replicas.size(), 1u);
    EXPECT_NEAR(rep.mi_report.mi, 0.0, 1e-15);
}

double gap_standard_error(const ExperimentReport& rep)
{
    double var = 0.0;
    for (const auto& rec : rep.replicas)
    {
        var += (rec.gap - rep.mean_gap) * (rec.gap - rep.mean_gap);
    }
    const auto n = static_cast<double>(rep.replicas.size());
    return std::sqrt(var / (n - 1) / n);
}

// With W uniform and independent of S, E[gap] = mean_r (test_r - pool_r):
// the train error of a fixed expert is unbiased for its pool column mean.
TEST(RunExperiment, AlphaZeroGapMatchesItsExactExpectation)
{
    const auto ds = test_bank(4);
    auto cfg = small_config(0.0);
    cfg.replicas = 3000;
    const auto rep = run_experiment(ds, cfg);
    EXPECT_NEAR(rep.mi_report.mi, 0.0, 1e-12);
    EXPECT_EQ(rep.mi_report.bound_mi, 0.0);
    const auto pool_means = ds.pool_losses().column_means();
    double expected = 0.0;
    for (std::size_t r = 0; r < ds.num_experts(); ++r)
    {
        expected += (ds.test_errors()[r] - pool_means[r]) / static_cast<double>(ds.num_experts());
    }
    EXPECT_LT(std::abs(rep.mean_gap - expected), 3 * gap_standard_error(rep));
}

// Test rows drawn like the pool rows: here literally the same rows, so the
// expected gap at alpha = 0 is exactly zero.
TEST(RunExperiment, AlphaZeroGapIsCenteredWhenTestMatchesPool)
{
    const auto base = test_bank(5);
    const ExpertBankDataset ds(base.pool_losses(), base.pool_losses(), LossKind::zero_one, "");
    auto cfg = small_config(0.0);
    cfg.replicas = 3000;
    const auto rep = run_experiment(ds, cfg);
    EXPECT_NEAR(rep.mi_report.mi, 0.0, 1e-12);
    EXPECT_LT(std::abs(rep.mean_gap), 3 * gap_standard_error(rep));
}

TEST(RunExperiment, DeterministicAndThreadInvariant)
{
    const auto ds = test_bank();
    auto cfg = small_config(0.7);
    const auto a = run_experiment(ds, cfg);
    cfg.threads = 4;
    const auto b = run_experiment(ds, cfg);
    ASSERT_EQ(a.replicas.size(), b.replicas.size());
    for (std::size_t i = 0; i < a.replicas.size(); ++i)
    {
        EXPECT_EQ(a.replicas[i].sampled, b.replicas[i].sampled);
        EXPECT_EQ(a.replicas[i].train_error, b.replicas[i].train_error);
    }
    EXPECT_EQ(a.mi_report.mi, b.mi_report.mi);
    EXPECT_EQ(a.mi_report.ci_low, b.mi_report.ci_low);
    EXPECT_EQ(a.mi_report.ci_high, b.mi_report.ci_high);
    EXPECT_EQ(a.mean_gap, b.mean_gap);
}

TEST(RunExperiment, RejectsInvalidConfig)
{
    const auto ds = test_bank();
    auto cfg = small_config(0.7);
    cfg.m = ds.num_pool() + 1;
    EXPECT_THROW((void)run_experiment(ds, cfg), ValidationError);
}

TEST(AlphaSweep, SingleAlphaMatchesRunExperiment)
{
    const auto ds = test_bank();
    const auto cfg = small_config(0.7);
    const std::vector<double> alphas{0.7};
    const auto sweep = alpha_sweep(ds, cfg, alphas);
    const auto single = run_experiment(ds, cfg);
    ASSERT_EQ(sweep.size(), 1u);
    EXPECT_EQ(sweep[0].mi_report.mi, single.mi_report.mi);
    EXPECT_EQ(sweep[0].mi_report.ci_low, single.mi_report.ci_low);
    EXPECT_EQ(sweep[0].mean_gap, single.mean_gap);
    EXPECT_EQ(sweep[0].mean_abs_gap, single.mean_abs_gap);
}

TEST(AlphaSweep, SharedWinnersAndNondecreasingMi)
{
    const auto ds = test_bank(6, 12);
    const std::vector<double> alphas{0.0, 0.25, 0.5, 0.7, 0.9, 1.0};
    const auto sweep = alpha_sweep(ds, small_config(0.3), alphas);
    ASSERT_EQ(sweep.size(), alphas.size());
    for (std::size_t k = 0; k < sweep.size(); ++k)
    {
        EXPECT_EQ(sweep[k].config.alpha, alphas[k]);
        for (std::size_t i = 0; i < sweep[k].replicas.size(); ++i)
        {
            EXPECT_EQ(sweep[k].replicas[i].winner, sweep[0].replicas[i].winner);
        }
        if (k > 0)
        {
            EXPECT_GE(sweep[k].mi_report.mi, sweep[k - 1].mi_report.mi);
        }
    }
    EXPECT_NEAR(sweep[0].mi_report.mi, 0.0, 1e-12);
}

TEST(AlphaSweep, AddingAlphasDoesNotPerturbOthers)
{
    const auto ds = test_bank();
    const auto a = alpha_sweep(ds, small_config(0.0), std::vector<double>{0.5, 0.9});
    const auto b = alpha_sweep(ds, small_config(0.0), std::vector<double>{0.1, 0.5, 0.7, 0.9});
    EXPECT_EQ(a[0].mi_report.mi, b[1].mi_report.mi);
    EXPECT_EQ(a[1].mean_gap, b[3].mean_gap);
    EXPECT_EQ(a[1].mi_report.ci_high, b[3].mi_report.ci_high);
}

TEST(AlphaSweep, RejectsBadGrids)
{
    const auto ds = test_bank();
    EXPECT_THROW((void)alpha_sweep(ds, small_config(0.5), std::vector<double>{}), ValidationError);
    EXPECT_THROW((void)alpha_sweep(ds, small_config(0.5), std::vector<double>{0.2, 1.2}),
                 ValidationError);
}
}  // namespace
}  // namespace finbank

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

#include "finbank/selection.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "finbank/error.hpp"
#include "oracles.hpp"

namespace finbank
{
namespace
{
ExpertBankDataset dataset_from_pool(Matrix pool)
{
    const std::size_t r = pool.cols();
    return ExpertBankDataset(std::move(pool), Matrix(1, r), LossKind::zero_one, "");
}

TEST(AlphaPosterior, PaperDefaultMasses)
{
    const AlphaPosterior q(4, 25, 0.7);
    EXPECT_NEAR(q.probs()[4], 0.712, 1e-15);
    for (std::size_t r = 0; r < 25; ++r)
    {
        if (r != 4)
        {
            EXPECT_NEAR(q.probs()[r], 0.012, 1e-15);
        }
    }
}

TEST(AlphaPosterior, Endpoints)
{
    const AlphaPosterior uniform(2, 5, 0.0);
    for (double p : uniform.probs())
    {
        EXPECT_EQ(p, 0.2);
    }
    const AlphaPosterior point(2, 5, 1.0);
    for (std::size_t r = 0; r < 5; ++r)
    {
        EXPECT_EQ(point.probs()[r], r == 2 ? 1.0 : 0.0);
    }
}

TEST(AlphaPosterior, InvariantsOverGrid)
{
    for (std::size_t r = 1; r <= 30; ++r)
    {
        for (double alpha = 0.0; alpha <= 1.0; alpha += 0.05)
        {
            const AlphaPosterior q(r - 1, r, alpha);
            double sum = 0.0;
            const double floor = (1.0 - alpha) / static_cast<double>(r);
            for (std::size_t t = 0; t < r; ++t)
            {
                sum += q.probs()[t];
                EXPECT_GE(q.probs()[t], floor - 1e-15);
            }
            EXPECT_NEAR(sum, 1.0, 1e-12);
            EXPECT_NEAR(q.probs()[r - 1], alpha + floor, 1e-15);
        }
    }
}

TEST(AlphaPosterior, RejectsBadArguments)
{
    EXPECT_THROW(AlphaPosterior(0, 3, -0.1), ValidationError);
    EXPECT_THROW(AlphaPosterior(0, 3, 1.1), ValidationError);
    EXPECT_THROW(AlphaPosterior(3, 3, 0.5), ValidationError);
    EXPECT_THROW(AlphaPosterior(0, 0, 0.5), ValidationError);
}

// q_{a'} = (a'/a) q_a + (1 - a'/a) uniform, entrywise.
TEST(AlphaPosterior, DegradationIdentity)
{
    const std::size_t r = 7;
    for (double a : {0.2, 0.5, 0.7, 1.0})
    {
        for (double a2 : {0.0, 0.1, 0.2})
        {
            const AlphaPosterior hi(3, r, a);
            const AlphaPosterior lo(3, r, a2);
            for (std::size_t t = 0; t < r; ++t)
            {
                const double mixed = (a2 / a) * hi.probs()[t] +
                                     (1.0 - a2 / a) / static_cast<double>(r);
                EXPECT_NEAR(lo.probs()[t], mixed, 1e-15);
            }
        }
    }
}

TEST(ErmSelect, TieGoesToFirstIdenticalColumn)
{
    const Matrix pool(3, 3, std::vector<double>{1, 0, 0, 0, 1, 1, 1, 0, 0});
    const auto ds = dataset_from_pool(pool);
    EXPECT_EQ(erm_select(ds, SampleIndices({0, 1, 2}, 3)), 1u);
    EXPECT_EQ(argmin_first(std::vector<double>{0.3, 0.1, 0.1}), 1u);
}

TEST(ErmSelect, StrictlyDominatingExpertWins)
{
    Matrix pool(4, 5, 1.0);
    for (std::size_t i = 0; i < 4; ++i)
    {
        pool(i, 3) = 0.0;
    }
    const auto ds = dataset_from_pool(pool);
    EXPECT_EQ(erm_select(ds, SampleIndices({0, 2}, 4)), 3u);
}

TEST(ErmSelect, AgreesWithExhaustiveScan)
{
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto ds = dataset_from_pool(oracle::random_binary_matrix(12, 5, 0.3, gen));
        std::vector<std::size_t> all(12);
        for (std::size_t i = 0; i < 12; ++i)
        {
            all[i] = i;
        }
        std::shuffle(all.begin(), all.end(), gen);
        std::vector<std::size_t> rows(all.begin(), all.begin() + 4);
        EXPECT_EQ(erm_select(ds, SampleIndices(rows, 12)),
                  oracle::brute_force_winner(ds.pool_losses(), rows));
    }
}

TEST(ErmSelect, AppendingAWorseExpertKeepsWinner)
{
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Matrix pool = oracle::random_binary_matrix(10, 4, 0.4, gen);
        const SampleIndices sample({1, 3, 5, 7}, 10);
        const auto ds = dataset_from_pool(pool);
        const auto winner = erm_select(ds, sample);
        const double best = candidate_empirical_error(ds, sample, winner);
        if (best >= 1.0)
        {
            continue;
        }
        Matrix bigger(10, 5);
        for (std::size_t i = 0; i < 10; ++i)
        {
            for (std::size_t t = 0; t < 4; ++t)
            {
                bigger(i, t) = pool(i, t);
            }
            bigger(i, 4) = 1.0;  // errs everywhere, strictly worse than best
        }
        EXPECT_EQ(erm_select(dataset_from_pool(bigger), sample), winner);
    }
}

TEST(AlphaPosteriorFromSample, UsesErmWinner)
{
    const Matrix pool(2, 3, std::vector<double>{1, 1, 0, 1, 0, 0});
    const auto ds = dataset_from_pool(pool);
    const auto q = alpha_posterior(ds, SampleIndices({0, 1}, 2), 0.5);
    EXPECT_EQ(q.winner(), 2u);
    EXPECT_NEAR(q.probs()[2], 0.5 + 0.5 / 3.0, 1e-15);
}

TEST(SampleCandidate, AlphaOneAlwaysReturnsWinner)
{
    Rng rng(3);
    const AlphaPosterior q(6, 9, 1.0);
    for (int i = 0; i < 10000; ++i)
    {
        ASSERT_EQ(sample_candidate(q, rng), 6u);
    }
}

TEST(SampleCandidate, UniformFrequencies)
{
    Rng rng(12345);
    const AlphaPosterior q(0, 2, 0.0);
    int ones = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
    {
        ones += sample_candidate(q, rng) == 1 ? 1 : 0;
    }
    EXPECT_NEAR(static_cast<double>(ones) / draws, 0.5, 0.01);
}

TEST(SampleCandidate, MonteCarloMatchesProbabilities)
{
    Rng rng(77);
    const AlphaPosterior q(2, 5, 0.6);
    std::vector<int> counts(5, 0);
    const int draws = 200000;
    for (int i = 0; i < draws; ++i)
    {
        ++counts[sample_candidate(q, rng)];
    }
    for (std::size_t t = 0; t < 5; ++t)
    {
        const double p = q.probs()[t];
        const double se = std::sqrt(p * (1 - p) / draws);
        EXPECT_NEAR(static_cast<double>(counts[t]) / draws, p, 5 * se);
    }
}

TEST(SampleCandidate, ReplayedStateGivesSameIndex)
{
    const AlphaPosterior q(1, 10, 0.3);
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        Rng a(seed);
        Rng b(seed);
        EXPECT_EQ(sample_candidate(q, a), sample_candidate(q, b));
    }
}

TEST(PickIndex, InverseCdf)
{
    const std::vector<double> p{0.25, 0.0, 0.75};
    EXPECT_EQ(pick_index(p, 0.0), 0u);
    EXPECT_EQ(pick_index(p, 0.2499), 0u);
    EXPECT_EQ(pick_index(p, 0.25), 2u);
    EXPECT_EQ(pick_index(p, 0.9999999), 2u);
    // Rounding in the cumulative sum must not land on a zero-mass tail.
    const std::vector<double> q{0.1, 0.2, 0.7, 0.0};
    EXPECT_EQ(pick_index(q, std::nextafter(1.0, 0.0)), 2u);
}
}  // namespace
}  // namespace finbank

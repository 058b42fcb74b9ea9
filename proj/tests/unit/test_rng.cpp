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

#include "finbank/rng.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdint>
#include <set>

namespace finbank
{
namespace
{
// The engine's output sequence is fixed by the standard; this pins it.
TEST(Rng, EngineMatchesStandardReferenceValue)
{
    Rng rng(5489);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i)
    {
        v = rng.next_u64();
    }
    EXPECT_EQ(v, 9981545732273789042ULL);
}

// Pinned so that a change to seed derivation shows up as a test failure
// rather than as silently different experiment outputs.
TEST(Rng, DerivedSeedsAreStable)
{
    static_assert(derive_seed(0, StreamTag::sample, 0) == 2295056644640486362ULL);
    EXPECT_EQ(derive_seed(42, StreamTag::bootstrap, 7), 14558198086047321336ULL);
    Rng rng(1, StreamTag::select, 3);
    EXPECT_EQ(rng.uniform01(), 0.06078597290144705);
    EXPECT_EQ(rng.below(1000), 183u);
}

TEST(Rng, StreamsDifferByTagAndIndex)
{
    std::set<std::uint64_t> seeds;
    for (auto tag : {StreamTag::sample, StreamTag::select, StreamTag::bootstrap, StreamTag::bank})
    {
        for (std::uint64_t i = 0; i < 100; ++i)
        {
            seeds.insert(derive_seed(3, tag, i));
        }
    }
    EXPECT_EQ(seeds.size(), 400u);
}

TEST(Rng, UniformStaysInUnitInterval)
{
    Rng rng(9);
    for (int i = 0; i < 100000; ++i)
    {
        const double u = rng.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, BelowIsRoughlyUniform)
{
    Rng rng(17);
    std::array<int, 7> counts{};
    const int draws = 70000;
    for (int i = 0; i < draws; ++i)
    {
        const auto k = rng.below(7);
        ASSERT_LT(k, 7u);
        ++counts[k];
    }
    // Binomial sd is about 92; 5 sd either side.
    for (int c : counts)
    {
        EXPECT_NEAR(c, draws / 7, 460);
    }
}

TEST(Rng, BelowRejectsZeroBound)
{
    Rng rng(1);
    EXPECT_ANY_THROW((void)rng.below(0));
}
}  // namespace
}  // namespace finbank

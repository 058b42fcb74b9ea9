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

#include "finbank/number_format.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

namespace finbank
{
namespace
{
TEST(NumberFormat, IntegralValuesHaveNoFraction)
{
    EXPECT_EQ(format_double(0.0), "0");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(NumberFormat, RandomDoublesRoundTripExactly)
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20000; ++k)
    {
        const double v = k % 2 == 0 ? u(gen) : u(gen) * std::pow(10.0, (k % 40) - 20);
        const auto back = parse_double(format_double(v));
        ASSERT_TRUE(back.has_value());
        ASSERT_EQ(*back, v) << format_double(v);
    }
    const double tiny = std::numeric_limits<double>::denorm_min();
    EXPECT_EQ(*parse_double(format_double(tiny)), tiny);
}

TEST(NumberFormat, ParseRejectsJunk)
{
    EXPECT_FALSE(parse_double("").has_value());
    EXPECT_FALSE(parse_double("1.0x").has_value());
    EXPECT_FALSE(parse_double(" 1").has_value());
    EXPECT_FALSE(parse_double("1,5").has_value());
    EXPECT_EQ(*parse_double("1e-3"), 1e-3);
}

TEST(NumberFormat, AppendExtendsBuffer)
{
    std::string s = "x=";
    append_double(s, 0.25);
    EXPECT_EQ(s, "x=0.25");
}
}  // namespace
}  // namespace finbank

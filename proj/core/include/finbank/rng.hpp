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
#include <random>

namespace finbank
{
/// Purpose tags keep the streams for different consumers of one replica
/// disjoint, so adding a consumer never shifts another's draws.
enum class StreamTag : std::uint64_t
{
    sample = 0x53414d50,     // replica training-sample draw
    select = 0x53454c45,     // candidate draw from the posterior
    bootstrap = 0x424f4f54,  // bootstrap resampling
    bank = 0x42414e4b,       // synthetic bank generation
};

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for the stream identified by (master, tag, index).
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, StreamTag tag,
                                                  std::uint64_t index) noexcept
{
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
    return splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Seeded generator state. The engine (mt19937_64) is fully specified by the
/// standard; the distributions below are written out here because the
/// standard library's are implementation-defined.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t master, StreamTag tag, std::uint64_t index)
        : engine_(derive_seed(master, tag, index))
    {
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer on [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};
}  // namespace finbank

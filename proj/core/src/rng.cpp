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

#include "finbank/error.hpp"

namespace finbank
{
__extension__ typedef unsigned __int128 u128;

// Lemire's multiply-shift with rejection; unbiased for every bound.
std::uint64_t Rng::below(std::uint64_t bound)
{
    detail::require(bound > 0, "Rng::below needs a positive bound");
    u128 product = static_cast<u128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound)
    {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold)
        {
            product = static_cast<u128>(engine_()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}
}  // namespace finbank

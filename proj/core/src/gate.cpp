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

#include "finbank/gate.hpp"

#include <cmath>
#include <string>

#include "finbank/error.hpp"

namespace finbank
{
GateMatrix::GateMatrix(Matrix conditional) : cond_(std::move(conditional))
{
    detail::require(cond_.rows() >= 1 && cond_.cols() >= 1, "gate matrix must be non-empty");
    for (std::size_t i = 0; i < cond_.rows(); ++i)
    {
        double sum = 0.0;
        for (double p : cond_.row(i))
        {
            detail::require(p >= 0.0 && std::isfinite(p),
                            "gate row " + std::to_string(i) + " has a negative or non-finite entry");
            sum += p;
        }
        detail::require(std::abs(sum - 1.0) <= kGateRowTolerance,
                        "gate row " + std::to_string(i) + " does not sum to 1");
    }
    marginal_ = cond_.column_means();
}
}  // namespace finbank

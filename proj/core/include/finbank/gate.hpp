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

#include <span>
#include <vector>

#include "finbank/matrix.hpp"

namespace finbank
{
/// Row-stochastic routing matrix p(t | x_i) together with its expert
/// marginal pi_t = (1/N) sum_i p(t | x_i).
class GateMatrix
{
public:
    /// Validates rows (nonnegative, summing to 1 within 1e-10) and derives
    /// the marginal from the column means.
    explicit GateMatrix(Matrix conditional);

    [[nodiscard]] const Matrix& conditional() const noexcept { return cond_; }
    [[nodiscard]] std::span<const double> marginal() const noexcept { return marginal_; }
    [[nodiscard]] std::size_t num_items() const noexcept { return cond_.rows(); }
    [[nodiscard]] std::size_t num_experts() const noexcept { return cond_.cols(); }

private:
    Matrix cond_;
    std::vector<double> marginal_;
};

inline constexpr double kGateRowTolerance = 1e-10;
}  // namespace finbank

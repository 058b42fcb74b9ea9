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
#include <span>
#include <vector>

#include "finbank/dataset.hpp"
#include "finbank/rng.hpp"

namespace finbank
{
/// Selection distribution over the bank for one sample: mass
/// alpha + (1 - alpha) / R on the ERM winner and (1 - alpha) / R elsewhere.
class AlphaPosterior
{
public:
    AlphaPosterior(ExpertIndex winner, std::size_t num_experts, double alpha);

    [[nodiscard]] std::span<const double> probs() const noexcept { return probs_; }
    [[nodiscard]] ExpertIndex winner() const noexcept { return winner_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] std::size_t num_experts() const noexcept { return probs_.size(); }

private:
    std::vector<double> probs_;
    ExpertIndex winner_;
    double alpha_;
};

/// Smallest index attaining the minimum of `errors` (exact comparisons).
[[nodiscard]] ExpertIndex argmin_first(std::span<const double> errors);

/// Expert with the lowest empirical error on `sample`; ties go to the
/// smallest index.
[[nodiscard]] ExpertIndex erm_select(const ExpertBankDataset& dataset,
                                     const SampleIndices& sample);

[[nodiscard]] AlphaPosterior alpha_posterior(const ExpertBankDataset& dataset,
                                             const SampleIndices& sample, double alpha);

/// Inverse-CDF lookup: the first index whose cumulative mass exceeds u.
[[nodiscard]] ExpertIndex pick_index(std::span<const double> probs, double u);

/// Draws W ~ q_alpha(.|S). Consumes exactly one uniform from `rng`.
[[nodiscard]] ExpertIndex sample_candidate(const AlphaPosterior& posterior, Rng& rng);
}  // namespace finbank

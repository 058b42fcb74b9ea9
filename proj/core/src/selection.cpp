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

#include "finbank/error.hpp"

namespace finbank
{
AlphaPosterior::AlphaPosterior(ExpertIndex winner, std::size_t num_experts, double alpha)
    : winner_(winner), alpha_(alpha)
{
    detail::require(num_experts >= 1, "posterior needs at least one expert");
    detail::require(winner < num_experts, "winner index out of range");
    detail::require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0,1]");
    const double floor = (1.0 - alpha) / static_cast<double>(num_experts);
    probs_.assign(num_experts, floor);
    probs_[winner] = alpha + floor;
}

ExpertIndex argmin_first(std::span<const double> errors)
{
    detail::require(!errors.empty(), "argmin over an empty bank");
    ExpertIndex best = 0;
    for (ExpertIndex t = 1; t < errors.size(); ++t)
    {
        if (errors[t] < errors[best])
        {
            best = t;
        }
    }
    return best;
}

ExpertIndex erm_select(const ExpertBankDataset& dataset, const SampleIndices& sample)
{
    return argmin_first(candidate_empirical_errors(dataset, sample));
}

AlphaPosterior alpha_posterior(const ExpertBankDataset& dataset, const SampleIndices& sample,
                               double alpha)
{
    detail::require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0,1]");
    return AlphaPosterior(erm_select(dataset, sample), dataset.num_experts(), alpha);
}

ExpertIndex pick_index(std::span<const double> probs, double u)
{
    detail::require(!probs.empty(), "cannot sample from an empty distribution");
    double cumulative = 0.0;
    for (ExpertIndex t = 0; t < probs.size(); ++t)
    {
        cumulative += probs[t];
        if (u < cumulative)
        {
            return t;
        }
    }
    // Rounding can leave the total a hair below u; fall back to the last
    // index carrying mass.
    for (ExpertIndex t = probs.size(); t-- > 0;)
    {
        if (probs[t] > 0.0)
        {
            return t;
        }
    }
    return probs.size() - 1;
}

ExpertIndex sample_candidate(const AlphaPosterior& posterior, Rng& rng)
{
    return pick_index(posterior.probs(), rng.uniform01());
}
}  // namespace finbank

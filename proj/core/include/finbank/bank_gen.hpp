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

#include "finbank/dataset.hpp"

namespace finbank
{
/// Parameters of the synthetic 0-1 expert bank.
///
/// Expert r errs on item i with marginal probability eps_r, with eps_r spaced
/// evenly over [error_rate_low, error_rate_high]. For each (item, expert)
/// pair a coin with bias common_noise_weight decides whether the error event
/// is read off the item's shared difficulty u_i (error iff u_i < eps_r) or
/// off fresh private noise. Weight 1 with equal rates gives identical error
/// sets; weight 0 gives independent experts.
struct BankGenConfig
{
    std::size_t num_experts = 25;
    std::size_t num_pool = 20000;
    std::size_t num_test = 10000;
    double error_rate_low = 0.08;
    double error_rate_high = 0.11;
    double common_noise_weight = 0.745;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-expert marginal error rates implied by the config.
[[nodiscard]] std::vector<double> expert_error_rates(const BankGenConfig& config);

[[nodiscard]] ExpertBankDataset gen_bank(const BankGenConfig& config);

/// Entry (r, s): fraction of test items on which exactly one of r, s errs.
/// Only defined for 0-1 losses.
[[nodiscard]] Matrix disagreement_matrix(const ExpertBankDataset& dataset);
}  // namespace finbank

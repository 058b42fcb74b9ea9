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

#include "finbank/bank_gen.hpp"

#include <string>

#include "finbank/error.hpp"
#include "finbank/number_format.hpp"
#include "finbank/rng.hpp"

namespace finbank
{
namespace
{
// Rows are generated from counter-based substreams so that the pool and test
// matrices never share draws and row i does not depend on row i-1.
enum : std::uint64_t
{
    kPoolStream = 0,
    kTestStream = 1,
};

Matrix generate_block(const BankGenConfig& config, const std::vector<double>& rates,
                      std::size_t rows, std::uint64_t block)
{
    Matrix losses(rows, config.num_experts);
    const std::uint64_t block_seed = derive_seed(config.seed, StreamTag::bank, block);
    for (std::size_t i = 0; i < rows; ++i)
    {
        Rng rng(block_seed, StreamTag::bank, i);
        const double difficulty = rng.uniform01();
        for (std::size_t r = 0; r < config.num_experts; ++r)
        {
            const bool shared = rng.bernoulli(config.common_noise_weight);
            const double private_noise = rng.uniform01();
            const double u = shared ? difficulty : private_noise;
            losses(i, r) = u < rates[r] ? 1.0 : 0.0;
        }
    }
    return losses;
}
}  // namespace

void BankGenConfig::validate() const
{
    detail::require(num_experts >= 1, "bank needs at least one expert");
    detail::require(num_pool >= 1 && num_test >= 1, "pool and test sizes must be positive");
    detail::require(error_rate_low >= 0.0 && error_rate_low <= error_rate_high &&
                        error_rate_high <= 1.0,
                    "need 0 <= error_rate_low <= error_rate_high <= 1");
    detail::require(common_noise_weight >= 0.0 && common_noise_weight <= 1.0,
                    "common_noise_weight must lie in [0,1]");
}

std::vector<double> expert_error_rates(const BankGenConfig& config)
{
    config.validate();
    std::vector<double> rates(config.num_experts, config.error_rate_low);
    if (config.num_experts > 1)
    {
        const double step = (config.error_rate_high - config.error_rate_low) /
                            static_cast<double>(config.num_experts - 1);
        for (std::size_t r = 0; r < config.num_experts; ++r)
        {
            rates[r] = config.error_rate_low + step * static_cast<double>(r);
        }
        rates.back() = config.error_rate_high;
    }
    return rates;
}

ExpertBankDataset gen_bank(const BankGenConfig& config)
{
    const auto rates = expert_error_rates(config);
    Matrix pool = generate_block(config, rates, config.num_pool, kPoolStream);
    Matrix test = generate_block(config, rates, config.num_test, kTestStream);

    std::string provenance = "finbank gen-bank: seed=" + std::to_string(config.seed) +
                             " experts=" + std::to_string(config.num_experts) +
                             " pool=" + std::to_string(config.num_pool) +
                             " test=" + std::to_string(config.num_test) +
                             " error_rate=[" + format_double(config.error_rate_low) + "," +
                             format_double(config.error_rate_high) +
                             "] common_noise_weight=" + format_double(config.common_noise_weight) +
                             "; pool and test rows are independent draws";
    return ExpertBankDataset(std::move(pool), std::move(test), LossKind::zero_one,
                             std::move(provenance));
}

Matrix disagreement_matrix(const ExpertBankDataset& dataset)
{
    detail::require(dataset.loss_kind() == LossKind::zero_one,
                    "disagreement_matrix needs 0-1 losses");
    const Matrix& test = dataset.test_losses();
    const std::size_t r = dataset.num_experts();
    Matrix counts(r, r, 0.0);
    for (std::size_t i = 0; i < test.rows(); ++i)
    {
        auto row = test.row(i);
        for (std::size_t a = 0; a < r; ++a)
        {
            for (std::size_t b = a + 1; b < r; ++b)
            {
                if (row[a] != row[b])
                {
                    counts(a, b) += 1.0;
                }
            }
        }
    }
    const auto n = static_cast<double>(test.rows());
    for (std::size_t a = 0; a < r; ++a)
    {
        for (std::size_t b = a + 1; b < r; ++b)
        {
            counts(a, b) /= n;
            counts(b, a) = counts(a, b);
        }
    }
    return counts;
}
}  // namespace finbank

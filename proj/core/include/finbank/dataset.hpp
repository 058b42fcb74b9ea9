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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finbank/matrix.hpp"

namespace finbank
{
using ExpertIndex = std::size_t;

enum class LossKind
{
    zero_one,
    bounded,
};

[[nodiscard]] std::string_view to_string(LossKind kind) noexcept;
[[nodiscard]] LossKind parse_loss_kind(std::string_view text);

/// Pool and test loss matrices for a fixed bank of R experts.
///
/// Entry (i, t) is the loss of expert t on item i. All entries lie in [0,1];
/// under LossKind::zero_one they are exactly 0 or 1. Instances are immutable
/// once constructed and every constructor path validates the invariants.
class ExpertBankDataset
{
public:
    ExpertBankDataset(Matrix pool_losses, Matrix test_losses, LossKind kind,
                      std::string provenance);

    [[nodiscard]] std::size_t num_experts() const noexcept { return pool_.cols(); }
    [[nodiscard]] std::size_t num_pool() const noexcept { return pool_.rows(); }
    [[nodiscard]] std::size_t num_test() const noexcept { return test_.rows(); }
    [[nodiscard]] const Matrix& pool_losses() const noexcept { return pool_; }
    [[nodiscard]] const Matrix& test_losses() const noexcept { return test_; }
    [[nodiscard]] LossKind loss_kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& provenance() const noexcept { return provenance_; }

    /// Candidate test errors: the column means of the test matrix.
    [[nodiscard]] std::span<const double> test_errors() const noexcept
    {
        return test_errors_;
    }

    friend bool operator==(const ExpertBankDataset& a, const ExpertBankDataset& b)
    {
        return a.kind_ == b.kind_ && a.provenance_ == b.provenance_ &&
               a.pool_ == b.pool_ && a.test_ == b.test_;
    }

private:
    Matrix pool_;
    Matrix test_;
    LossKind kind_;
    std::string provenance_;
    std::vector<double> test_errors_;
};

/// A training sample S, represented by the distinct pool rows it selects.
class SampleIndices
{
public:
    SampleIndices(std::vector<std::size_t> indices, std::size_t num_pool);

    [[nodiscard]] std::span<const std::size_t> indices() const noexcept { return indices_; }
    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }

private:
    std::vector<std::size_t> indices_;
};

struct ExperimentConfig
{
    double alpha = 0.7;
    std::size_t m = 256;
    std::size_t replicas = 300;
    std::uint64_t master_seed = 0;
    std::size_t bootstrap_resamples = 2000;
    double ci_level = 0.95;
    std::size_t threads = 1;

    /// Throws ValidationError unless alpha in [0,1], m in [1, num_pool],
    /// replicas >= 1 and bootstrap_resamples >= 1.
    void validate(std::size_t num_pool) const;
};

/// Mean loss of expert `expert` over the sample rows of the pool matrix.
[[nodiscard]] double candidate_empirical_error(const ExpertBankDataset& dataset,
                                               const SampleIndices& sample,
                                               ExpertIndex expert);

/// Empirical errors of every expert on one sample, in expert order.
[[nodiscard]] std::vector<double> candidate_empirical_errors(
    const ExpertBankDataset& dataset, const SampleIndices& sample);

inline constexpr int kDatasetFormatVersion = 1;

/// Reads meta.json, pool_losses.csv and test_losses.csv from `dir`.
[[nodiscard]] ExpertBankDataset load_dataset(const std::filesystem::path& dir);

/// Writes the three dataset files into `dir`, creating it if needed. Each
/// file is written to a temporary name and renamed into place.
void save_dataset(const ExpertBankDataset& dataset, const std::filesystem::path& dir);

/// Serialises a loss matrix in the dataset CSV layout (header e0..e{R-1}).
[[nodiscard]] std::string format_loss_csv(const Matrix& losses);

/// Parses the dataset CSV layout; `what` names the file in diagnostics.
[[nodiscard]] Matrix parse_loss_csv(std::string_view text, std::string_view what);
}  // namespace finbank

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
#include <span>
#include <utility>
#include <vector>

#include "finbank/gate.hpp"
#include "finbank/matrix.hpp"

namespace finbank
{
/// M posterior rows q_{i,r} over R experts, one per Monte Carlo sample.
class PosteriorBatch
{
public:
    /// Rows must be nonnegative and sum to 1 within 1e-12.
    PosteriorBatch(Matrix rows, double alpha);

    [[nodiscard]] const Matrix& rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t num_samples() const noexcept { return rows_.rows(); }
    [[nodiscard]] std::size_t num_experts() const noexcept { return rows_.cols(); }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }

private:
    Matrix rows_;
    double alpha_;
};

/// Plug-in information quantities for one batch, all in nats.
struct MIReport
{
    double h_w = 0.0;
    double h_w_given_s = 0.0;
    double mi = 0.0;
    double mi_miller_madow = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double ci_level = 0.95;
    double bound_mi = 0.0;
    double bound_union = 0.0;
    /// True when a negative mi was clamped to 0 before taking the root.
    bool bound_clamped = false;
    std::vector<double> marginal;
};

/// p_r = (1/M) sum_i q_{i,r}.
[[nodiscard]] std::vector<double> empirical_marginal(const PosteriorBatch& batch);

/// Shannon entropy in nats with 0 log 0 = 0. Rejects negative entries and
/// vectors whose sum is further than 1e-9 from 1.
[[nodiscard]] double entropy(std::span<const double> p);

/// Mean row entropy of the batch.
[[nodiscard]] double conditional_entropy(const PosteriorBatch& batch);

/// Entropy of the alpha-mixture posterior, identical for every winner.
[[nodiscard]] double alpha_mixture_entropy(double alpha, std::size_t num_experts);

/// Fills h_w, h_w_given_s, mi, mi_miller_madow and marginal. Bounds and the
/// confidence interval are left at zero.
[[nodiscard]] MIReport estimate_mi(const PosteriorBatch& batch);

/// mi of the batch built from `rows` (a subset or resample of batch rows,
/// given by index). Shares the arithmetic of estimate_mi.
[[nodiscard]] double estimate_mi_for_rows(const PosteriorBatch& batch,
                                          std::span<const std::size_t> rows);

/// Percentile bootstrap interval for mi, resampling whole rows with
/// replacement. Resample b draws from the stream (seed, bootstrap, b), so
/// the result does not depend on `threads`.
[[nodiscard]] std::pair<double, double> bootstrap_ci(const PosteriorBatch& batch,
                                                     std::size_t resamples, double level,
                                                     std::uint64_t seed,
                                                     std::size_t threads = 1);

/// Miller-Madow bias term (R - 1) / (2M).
[[nodiscard]] double miller_madow_correction(std::size_t num_experts, std::size_t num_samples);

/// sqrt(2 max(mi, 0) / m).
[[nodiscard]] double mi_bound(double mi, std::size_t m);

/// sqrt(log R / (2m)).
[[nodiscard]] double union_bound(std::size_t num_experts, std::size_t m);

/// Plug-in routing information (1/N) sum_i sum_t p(t|x_i) log(p(t|x_i)/pi_t).
[[nodiscard]] double routing_mi(const GateMatrix& gate);
}  // namespace finbank

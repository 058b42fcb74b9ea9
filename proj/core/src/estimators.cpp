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

#include "finbank/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "finbank/error.hpp"
#include "finbank/parallel.hpp"
#include "finbank/rng.hpp"

namespace finbank
{
namespace
{
constexpr double kBatchRowTolerance = 1e-12;
constexpr double kEntropySumTolerance = 1e-9;

double xlogx(double x) noexcept { return x > 0.0 ? x * std::log(x) : 0.0; }

// Entropy without validation; callers have already checked the vector.
double entropy_unchecked(std::span<const double> p) noexcept
{
    double h = 0.0;
    for (double v : p)
    {
        h -= xlogx(v);
    }
    return h;
}

// Linear interpolation between order statistics (the "type 7" quantile).
double sorted_quantile(std::span<const double> sorted, double q)
{
    if (sorted.size() == 1)
    {
        return sorted.front();
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

// Distinct posterior rows with their multiplicities. Weighting each distinct
// row by count / total gives the same plug-in quantities as averaging row by
// row, but a batch of identical rows then yields a marginal equal to that row
// bit for bit, so its information is exactly zero.
struct RowGroups
{
    std::vector<std::size_t> group_of_row;
    std::vector<std::size_t> representative;  // first row of each group
    std::vector<double> entropy;              // entropy of each group's row
};

RowGroups group_rows(const Matrix& rows)
{
    RowGroups groups;
    groups.group_of_row.resize(rows.rows());
    std::map<std::vector<double>, std::size_t> seen;
    for (std::size_t i = 0; i < rows.rows(); ++i)
    {
        auto row = rows.row(i);
        auto [it, inserted] =
            seen.try_emplace(std::vector<double>(row.begin(), row.end()), groups.representative.size());
        if (inserted)
        {
            groups.representative.push_back(i);
            groups.entropy.push_back(entropy_unchecked(row));
        }
        groups.group_of_row[i] = it->second;
    }
    return groups;
}

// Fills `marginal` and returns H(marginal) - mean row entropy for a multiset
// of groups given by `counts` (summing to `total`).
double mi_from_counts(const Matrix& rows, const RowGroups& groups,
                      std::span<const std::size_t> counts, std::size_t total,
                      std::vector<double>& marginal)
{
    marginal.assign(rows.cols(), 0.0);
    double h_cond = 0.0;
    const auto n = static_cast<double>(total);
    for (std::size_t g = 0; g < counts.size(); ++g)
    {
        if (counts[g] == 0)
        {
            continue;
        }
        const double w = static_cast<double>(counts[g]) / n;
        auto row = rows.row(groups.representative[g]);
        for (std::size_t r = 0; r < row.size(); ++r)
        {
            marginal[r] += w * row[r];
        }
        h_cond += w * groups.entropy[g];
    }
    return entropy_unchecked(marginal) - h_cond;
}

std::vector<std::size_t> count_groups(const RowGroups& groups, std::span<const std::size_t> picks)
{
    std::vector<std::size_t> counts(groups.representative.size(), 0);
    for (std::size_t i : picks)
    {
        ++counts[groups.group_of_row[i]];
    }
    return counts;
}

std::vector<std::size_t> all_rows(std::size_t m)
{
    std::vector<std::size_t> rows(m);
    for (std::size_t i = 0; i < m; ++i)
    {
        rows[i] = i;
    }
    return rows;
}
}  // namespace

PosteriorBatch::PosteriorBatch(Matrix rows, double alpha) : rows_(std::move(rows)), alpha_(alpha)
{
    detail::require(rows_.rows() >= 1, "posterior batch is empty");
    detail::require(rows_.cols() >= 1, "posterior batch has no experts");
    for (std::size_t i = 0; i < rows_.rows(); ++i)
    {
        double sum = 0.0;
        for (double q : rows_.row(i))
        {
            detail::require(q >= 0.0, "posterior row " + std::to_string(i) + " has a negative entry");
            sum += q;
        }
        detail::require(std::abs(sum - 1.0) <= kBatchRowTolerance,
                        "posterior row " + std::to_string(i) + " does not sum to 1");
    }
}

std::vector<double> empirical_marginal(const PosteriorBatch& batch)
{
    const auto groups = group_rows(batch.rows());
    const auto counts = count_groups(groups, all_rows(batch.num_samples()));
    std::vector<double> marginal;
    (void)mi_from_counts(batch.rows(), groups, counts, batch.num_samples(), marginal);
    return marginal;
}

double entropy(std::span<const double> p)
{
    detail::require(!p.empty(), "entropy of an empty vector");
    double sum = 0.0;
    for (double v : p)
    {
        detail::require(v >= 0.0, "entropy: negative probability");
        sum += v;
    }
    detail::require(std::abs(sum - 1.0) <= kEntropySumTolerance,
                    "entropy: probabilities do not sum to 1");
    return entropy_unchecked(p);
}

double conditional_entropy(const PosteriorBatch& batch)
{
    const auto groups = group_rows(batch.rows());
    const auto counts = count_groups(groups, all_rows(batch.num_samples()));
    const auto n = static_cast<double>(batch.num_samples());
    double h = 0.0;
    for (std::size_t g = 0; g < counts.size(); ++g)
    {
        h += static_cast<double>(counts[g]) / n * groups.entropy[g];
    }
    return h;
}

double alpha_mixture_entropy(double alpha, std::size_t num_experts)
{
    detail::require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0,1]");
    detail::require(num_experts >= 1, "bank needs at least one expert");
    const auto r = static_cast<double>(num_experts);
    const double floor = (1.0 - alpha) / r;
    return -xlogx(alpha + floor) - (r - 1.0) * xlogx(floor);
}

MIReport estimate_mi(const PosteriorBatch& batch)
{
    MIReport report;
    report.marginal = empirical_marginal(batch);
    report.h_w = entropy(report.marginal);
    report.h_w_given_s = conditional_entropy(batch);
    report.mi = report.h_w - report.h_w_given_s;
    report.mi_miller_madow =
        report.mi + miller_madow_correction(batch.num_experts(), batch.num_samples());
    return report;
}

double estimate_mi_for_rows(const PosteriorBatch& batch, std::span<const std::size_t> rows)
{
    detail::require(!rows.empty(), "estimate_mi_for_rows: no rows selected");
    for (std::size_t i : rows)
    {
        detail::require(i < batch.num_samples(), "estimate_mi_for_rows: row index out of range");
    }
    const auto groups = group_rows(batch.rows());
    std::vector<double> marginal;
    return mi_from_counts(batch.rows(), groups, count_groups(groups, rows), rows.size(), marginal);
}

std::pair<double, double> bootstrap_ci(const PosteriorBatch& batch, std::size_t resamples,
                                       double level, std::uint64_t seed, std::size_t threads)
{
    detail::require(resamples >= 1, "bootstrap needs at least one resample");
    detail::require(level > 0.0 && level < 1.0, "confidence level must lie in (0,1)");

    const std::size_t m = batch.num_samples();
    const auto groups = group_rows(batch.rows());
    std::vector<double> estimates(resamples);
    parallel_for(resamples, threads, [&](std::size_t b) {
        Rng rng(seed, StreamTag::bootstrap, b);
        std::vector<std::size_t> picks(m);
        for (auto& p : picks)
        {
            p = static_cast<std::size_t>(rng.below(m));
        }
        std::vector<double> marginal;
        estimates[b] = mi_from_counts(batch.rows(), groups, count_groups(groups, picks), m, marginal);
    });

    std::sort(estimates.begin(), estimates.end());
    const double tail = (1.0 - level) / 2.0;
    return {sorted_quantile(estimates, tail), sorted_quantile(estimates, 1.0 - tail)};
}

double miller_madow_correction(std::size_t num_experts, std::size_t num_samples)
{
    detail::require(num_samples >= 1, "Miller-Madow needs at least one sample");
    return (static_cast<double>(num_experts) - 1.0) / (2.0 * static_cast<double>(num_samples));
}

double mi_bound(double mi, std::size_t m)
{
    detail::require(m >= 1, "sample size must be at least 1");
    return std::sqrt(2.0 * std::max(mi, 0.0) / static_cast<double>(m));
}

double union_bound(std::size_t num_experts, std::size_t m)
{
    detail::require(num_experts >= 1, "bank needs at least one expert");
    detail::require(m >= 1, "sample size must be at least 1");
    return std::sqrt(std::log(static_cast<double>(num_experts)) / (2.0 * static_cast<double>(m)));
}

double routing_mi(const GateMatrix& gate)
{
    const Matrix& cond = gate.conditional();
    const auto marginal = gate.marginal();
    double total = 0.0;
    for (std::size_t i = 0; i < cond.rows(); ++i)
    {
        auto row = cond.row(i);
        double row_kl = 0.0;
        for (std::size_t t = 0; t < row.size(); ++t)
        {
            if (row[t] > 0.0)
            {
                if (!(marginal[t] > 0.0))
                {
                    throw std::logic_error("routing_mi: zero marginal under nonzero conditional mass");
                }
                row_kl += row[t] * std::log(row[t] / marginal[t]);
            }
        }
        total += row_kl;
    }
    return total / static_cast<double>(cond.rows());
}
}  // namespace finbank

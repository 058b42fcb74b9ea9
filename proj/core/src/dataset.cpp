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

#include "finbank/dataset.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "finbank/atomic_file.hpp"
#include "finbank/error.hpp"
#include "finbank/number_format.hpp"

namespace finbank
{
namespace
{
void validate_losses(const Matrix& losses, LossKind kind, std::string_view what)
{
    for (std::size_t i = 0; i < losses.rows(); ++i)
    {
        for (std::size_t t = 0; t < losses.cols(); ++t)
        {
            const double v = losses(i, t);
            if (!(v >= 0.0 && v <= 1.0))
            {
                throw ValidationError(std::string(what) + ": entry (" + std::to_string(i) +
                                      "," + std::to_string(t) + ") = " + format_double(v) +
                                      " outside [0,1]");
            }
            if (kind == LossKind::zero_one && v != 0.0 && v != 1.0)
            {
                throw ValidationError(std::string(what) + ": entry (" + std::to_string(i) +
                                      "," + std::to_string(t) + ") = " + format_double(v) +
                                      " is not 0/1 under loss_kind zero_one");
            }
        }
    }
}

std::string csv_header(std::size_t num_experts)
{
    std::string header;
    for (std::size_t t = 0; t < num_experts; ++t)
    {
        if (t > 0)
        {
            header += ',';
        }
        header += 'e';
        header += std::to_string(t);
    }
    return header;
}

template <typename T>
T json_field(const nlohmann::json& meta, const char* key)
{
    if (!meta.contains(key))
    {
        throw ValidationError(std::string("meta.json: missing key '") + key + "'");
    }
    try
    {
        return meta.at(key).get<T>();
    }
    catch (const nlohmann::json::exception&)
    {
        throw ValidationError(std::string("meta.json: key '") + key + "' has the wrong type");
    }
}
}  // namespace

std::string_view to_string(LossKind kind) noexcept
{
    return kind == LossKind::zero_one ? "zero_one" : "bounded";
}

LossKind parse_loss_kind(std::string_view text)
{
    if (text == "zero_one")
    {
        return LossKind::zero_one;
    }
    if (text == "bounded")
    {
        return LossKind::bounded;
    }
    throw ValidationError("unknown loss_kind '" + std::string(text) + "'");
}

ExpertBankDataset::ExpertBankDataset(Matrix pool_losses, Matrix test_losses, LossKind kind,
                                     std::string provenance)
    : pool_(std::move(pool_losses)),
      test_(std::move(test_losses)),
      kind_(kind),
      provenance_(std::move(provenance))
{
    detail::require(pool_.cols() >= 1, "dataset needs at least one expert");
    detail::require(pool_.rows() >= 1, "pool matrix needs at least one row");
    detail::require(test_.rows() >= 1, "test matrix needs at least one row");
    detail::require(pool_.cols() == test_.cols(),
                    "pool and test matrices disagree on the number of experts");
    validate_losses(pool_, kind_, "pool_losses");
    validate_losses(test_, kind_, "test_losses");
    test_errors_ = test_.column_means();
}

SampleIndices::SampleIndices(std::vector<std::size_t> indices, std::size_t num_pool)
    : indices_(std::move(indices))
{
    detail::require(!indices_.empty(), "sample must contain at least one row");
    std::unordered_set<std::size_t> seen;
    seen.reserve(indices_.size());
    for (std::size_t j : indices_)
    {
        detail::require(j < num_pool, "sample index " + std::to_string(j) +
                                          " outside pool of " + std::to_string(num_pool));
        detail::require(seen.insert(j).second,
                        "sample index " + std::to_string(j) + " repeated");
    }
}

void ExperimentConfig::validate(std::size_t num_pool) const
{
    detail::require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0,1]");
    detail::require(m >= 1, "sample size m must be at least 1");
    detail::require(m <= num_pool, "sample size m = " + std::to_string(m) +
                                       " exceeds pool size " + std::to_string(num_pool));
    detail::require(replicas >= 1, "replica count M must be at least 1");
    detail::require(bootstrap_resamples >= 1, "bootstrap resamples must be at least 1");
    detail::require(ci_level > 0.0 && ci_level < 1.0, "confidence level must lie in (0,1)");
}

double candidate_empirical_error(const ExpertBankDataset& dataset, const SampleIndices& sample,
                                 ExpertIndex expert)
{
    detail::require(expert < dataset.num_experts(),
                    "expert index " + std::to_string(expert) + " out of range");
    const Matrix& pool = dataset.pool_losses();
    double sum = 0.0;
    for (std::size_t j : sample.indices())
    {
        detail::require(j < pool.rows(), "sample index out of range for this dataset");
        sum += pool(j, expert);
    }
    return sum / static_cast<double>(sample.size());
}

std::vector<double> candidate_empirical_errors(const ExpertBankDataset& dataset,
                                               const SampleIndices& sample)
{
    const Matrix& pool = dataset.pool_losses();
    std::vector<double> errors(dataset.num_experts(), 0.0);
    for (std::size_t j : sample.indices())
    {
        detail::require(j < pool.rows(), "sample index out of range for this dataset");
        auto row = pool.row(j);
        for (std::size_t t = 0; t < errors.size(); ++t)
        {
            errors[t] += row[t];
        }
    }
    // Divide once per expert so this matches candidate_empirical_error exactly.
    for (double& e : errors)
    {
        e /= static_cast<double>(sample.size());
    }
    return errors;
}

std::string format_loss_csv(const Matrix& losses)
{
    std::string out = csv_header(losses.cols());
    out += '\n';
    out.reserve(out.size() + losses.rows() * losses.cols() * 2);
    for (std::size_t i = 0; i < losses.rows(); ++i)
    {
        auto row = losses.row(i);
        for (std::size_t t = 0; t < row.size(); ++t)
        {
            if (t > 0)
            {
                out += ',';
            }
            append_double(out, row[t]);
        }
        out += '\n';
    }
    return out;
}

Matrix parse_loss_csv(std::string_view text, std::string_view what)
{
    const std::string name(what);
    auto next_line = [&text](std::string_view& line) {
        if (text.empty())
        {
            return false;
        }
        const auto nl = text.find('\n');
        if (nl == std::string_view::npos)
        {
            line = text;
            text = {};
        }
        else
        {
            line = text.substr(0, nl);
            text.remove_prefix(nl + 1);
        }
        return true;
    };

    std::string_view line;
    if (!next_line(line))
    {
        throw ValidationError(name + ": empty file");
    }
    std::size_t cols = 0;
    {
        std::string_view header = line;
        while (true)
        {
            const auto comma = header.find(',');
            const auto field = header.substr(0, comma);
            if (field != "e" + std::to_string(cols))
            {
                throw ValidationError(name + ": header field " + std::to_string(cols) +
                                      " should be 'e" + std::to_string(cols) + "'");
            }
            ++cols;
            if (comma == std::string_view::npos)
            {
                break;
            }
            header.remove_prefix(comma + 1);
        }
    }

    std::vector<double> data;
    std::size_t rows = 0;
    while (next_line(line))
    {
        if (line.empty() && text.empty())
        {
            break;
        }
        std::size_t field_count = 0;
        while (true)
        {
            const auto comma = line.find(',');
            const auto field = line.substr(0, comma);
            const auto value = parse_double(field);
            if (!value)
            {
                throw ValidationError(name + ": row " + std::to_string(rows + 1) +
                                      ": cannot parse '" + std::string(field) + "'");
            }
            data.push_back(*value);
            ++field_count;
            if (comma == std::string_view::npos)
            {
                break;
            }
            line.remove_prefix(comma + 1);
        }
        if (field_count != cols)
        {
            throw ValidationError(name + ": row " + std::to_string(rows + 1) + " has " +
                                  std::to_string(field_count) + " fields, expected " +
                                  std::to_string(cols));
        }
        ++rows;
    }
    return Matrix(rows, cols, std::move(data));
}

ExpertBankDataset load_dataset(const std::filesystem::path& dir)
{
    const auto meta_path = dir / "meta.json";
    const auto pool_path = dir / "pool_losses.csv";
    const auto test_path = dir / "test_losses.csv";
    for (const auto& p : {meta_path, pool_path, test_path})
    {
        if (!std::filesystem::is_regular_file(p))
        {
            throw ValidationError("missing dataset file '" + p.string() + "'");
        }
    }

    nlohmann::json meta;
    try
    {
        meta = nlohmann::json::parse(read_file(meta_path));
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw ValidationError(std::string("meta.json: ") + e.what());
    }
    if (!meta.is_object())
    {
        throw ValidationError("meta.json: top level must be an object");
    }
    const auto version = json_field<int>(meta, "format_version");
    if (version != kDatasetFormatVersion)
    {
        throw ValidationError("meta.json: unsupported format_version " + std::to_string(version));
    }
    const auto num_experts = json_field<std::size_t>(meta, "num_experts");
    const auto num_pool = json_field<std::size_t>(meta, "num_pool");
    const auto num_test = json_field<std::size_t>(meta, "num_test");
    const auto kind = parse_loss_kind(json_field<std::string>(meta, "loss_kind"));
    auto provenance = json_field<std::string>(meta, "provenance");

    Matrix pool = parse_loss_csv(read_file(pool_path), "pool_losses.csv");
    Matrix test = parse_loss_csv(read_file(test_path), "test_losses.csv");

    auto check_dims = [](const Matrix& mat, std::size_t rows, std::size_t cols,
                         const std::string& name) {
        if (mat.rows() != rows || mat.cols() != cols)
        {
            throw ValidationError(name + ": dimension mismatch, meta.json says " +
                                  std::to_string(rows) + "x" + std::to_string(cols) +
                                  " but file has " + std::to_string(mat.rows()) + "x" +
                                  std::to_string(mat.cols()));
        }
    };
    check_dims(pool, num_pool, num_experts, "pool_losses.csv");
    check_dims(test, num_test, num_experts, "test_losses.csv");

    return ExpertBankDataset(std::move(pool), std::move(test), kind, std::move(provenance));
}

void save_dataset(const ExpertBankDataset& dataset, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
    {
        throw IoError("cannot create dataset directory '" + dir.string() + "'");
    }

    nlohmann::ordered_json meta;
    meta["format_version"] = kDatasetFormatVersion;
    meta["num_experts"] = dataset.num_experts();
    meta["num_pool"] = dataset.num_pool();
    meta["num_test"] = dataset.num_test();
    meta["loss_kind"] = std::string(to_string(dataset.loss_kind()));
    meta["provenance"] = dataset.provenance();

    write_file_atomic(dir / "pool_losses.csv", format_loss_csv(dataset.pool_losses()));
    write_file_atomic(dir / "test_losses.csv", format_loss_csv(dataset.test_losses()));
    // meta.json goes last: a directory without it is not a loadable dataset.
    write_file_atomic(dir / "meta.json", meta.dump(2) + "\n");
}
}  // namespace finbank

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

#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "finbank/atomic_file.hpp"
#include "finbank/bank_gen.hpp"
#include "finbank/dataset.hpp"
#include "finbank/error.hpp"
#include "finbank/estimators.hpp"
#include "finbank/harness.hpp"
#include "finbank/number_format.hpp"
#include "finbank/rd_solver.hpp"
#include "finbank/report_io.hpp"

namespace finbank::cli
{
namespace
{
namespace fs = std::filesystem;

struct CommonFlags
{
    std::string out;
    std::size_t threads = 1;
    bool force = false;
};

struct ExperimentFlags
{
    std::string data;
    double alpha = 0.7;
    std::size_t m = 256;
    std::size_t replicas = 300;
    std::uint64_t seed = 0;
    std::size_t bootstrap = 2000;
    double ci_level = 0.95;
};

struct RdFlags
{
    std::string data;
    double lambda_min = 1e-3;
    double lambda_max = 1e1;
    std::size_t points = 25;
    double tol = 1e-9;
    std::size_t max_iter = 10000;
    std::size_t rows = 0;
};

struct RoutingFlags
{
    std::string gate;
    std::string data;
    double lambda = 0.1;
    double tol = 1e-9;
    std::size_t max_iter = 10000;
    std::size_t rows = 0;
};

void add_common(CLI::App& sub, CommonFlags& flags)
{
    sub.add_option("--out", flags.out, "Output directory")->required();
    sub.add_option("--threads", flags.threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub.add_flag("--force", flags.force, "Overwrite existing output files");
}

void add_experiment(CLI::App& sub, ExperimentFlags& flags, bool with_alpha)
{
    sub.add_option("--data", flags.data, "Dataset directory")->required();
    if (with_alpha)
    {
        sub.add_option("--alpha", flags.alpha, "Mixture weight on the ERM winner")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
    }
    sub.add_option("--m", flags.m, "Training-sample size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub.add_option("--replicas", flags.replicas, "Monte Carlo replica count M")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub.add_option("--seed", flags.seed, "Master seed")->capture_default_str();
    sub.add_option("--bootstrap", flags.bootstrap, "Bootstrap resamples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub.add_option("--ci-level", flags.ci_level, "Bootstrap confidence level")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
}

ExperimentConfig to_config(const ExperimentFlags& flags, const CommonFlags& common)
{
    ExperimentConfig config;
    config.alpha = flags.alpha;
    config.m = flags.m;
    config.replicas = flags.replicas;
    config.master_seed = flags.seed;
    config.bootstrap_resamples = flags.bootstrap;
    config.ci_level = flags.ci_level;
    config.threads = common.threads;
    return config;
}

// Refuses to clobber existing outputs unless --force was given.
void prepare_outputs(const CommonFlags& common, const std::vector<std::string>& files)
{
    const fs::path dir(common.out);
    if (fs::exists(dir) && !fs::is_directory(dir))
    {
        throw ValidationError("--out '" + common.out + "' exists and is not a directory");
    }
    if (!common.force)
    {
        for (const auto& f : files)
        {
            if (fs::exists(dir / f))
            {
                throw ValidationError("'" + (dir / f).string() +
                                      "' already exists (pass --force to overwrite)");
            }
        }
    }
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
    {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
}

Matrix leading_rows(const Matrix& losses, std::size_t rows)
{
    if (rows == 0 || rows >= losses.rows())
    {
        return losses;
    }
    std::vector<double> data(losses.data().begin(),
                             losses.data().begin() + static_cast<std::ptrdiff_t>(rows * losses.cols()));
    return Matrix(rows, losses.cols(), std::move(data));
}

int cmd_gen_bank(const BankGenConfig& config, const CommonFlags& common, std::ostream& out)
{
    config.validate();
    prepare_outputs(common, {"meta.json", "pool_losses.csv", "test_losses.csv"});
    const auto dataset = gen_bank(config);
    save_dataset(dataset, common.out);
    out << "wrote " << dataset.num_experts() << "-expert bank (" << dataset.num_pool()
        << " pool, " << dataset.num_test() << " test rows) to " << common.out << "\n";
    return kExitOk;
}

int cmd_mi(const ExperimentFlags& flags, const CommonFlags& common, std::ostream& out)
{
    prepare_outputs(common, {"mi_report.json", "gap_hist.csv"});
    const auto dataset = load_dataset(flags.data);
    const auto config = to_config(flags, common);
    config.validate(dataset.num_pool());

    const auto report = run_experiment(dataset, config);
    ensure_dir(common.out);
    const fs::path dir(common.out);
    write_file_atomic(dir / "mi_report.json", format_mi_report_json(report));
    write_file_atomic(dir / "gap_hist.csv", format_gap_hist_csv(report.gap_histogram));
    out << "I(S;W) = " << format_double(report.mi_report.mi) << " nats, bound "
        << format_double(report.mi_report.bound_mi) << ", mean gap "
        << format_double(report.mean_gap) << "\n";
    return kExitOk;
}

int cmd_alpha_sweep(const ExperimentFlags& flags, const std::vector<double>& alphas,
                    const CommonFlags& common, std::ostream& out)
{
    detail::require(!alphas.empty(), "--alphas must list at least one value");
    for (double a : alphas)
    {
        detail::require(a >= 0.0 && a <= 1.0, "--alphas values must lie in [0,1]");
    }
    prepare_outputs(common, {"alpha_sweep.csv"});
    const auto dataset = load_dataset(flags.data);
    auto config = to_config(flags, common);
    config.alpha = alphas.front();
    config.validate(dataset.num_pool());

    const auto reports = alpha_sweep(dataset, config, alphas);
    ensure_dir(common.out);
    write_file_atomic(fs::path(common.out) / "alpha_sweep.csv", format_alpha_sweep_csv(reports));
    out << "wrote " << reports.size() << " sweep rows\n";
    return kExitOk;
}

int cmd_rd_curve(const RdFlags& flags, const CommonFlags& common, std::ostream& out)
{
    detail::require(flags.lambda_min > 0.0 && flags.lambda_max >= flags.lambda_min,
                    "need 0 < --lambda-min <= --lambda-max");
    detail::require(flags.points >= 1, "--points must be at least 1");
    prepare_outputs(common, {"rd_curve.csv"});
    const auto dataset = load_dataset(flags.data);
    const Matrix losses = leading_rows(dataset.test_losses(), flags.rows);

    BaOptions options;
    options.tol = flags.tol;
    options.max_iter = flags.max_iter;
    const auto grid = log_grid(flags.lambda_min, flags.lambda_max, flags.points);
    const auto points = rd_sweep(losses, grid, options, common.threads);
    ensure_dir(common.out);
    write_file_atomic(fs::path(common.out) / "rd_curve.csv", format_rd_curve_csv(points));

    const auto bends = convexity_violations(points);
    out << "wrote " << points.size() << " curve points";
    if (!bends.empty())
    {
        out << " (" << bends.size() << " convexity violation(s), reported only)";
    }
    out << "\n";
    return kExitOk;
}

int cmd_routing_mi(const RoutingFlags& flags, const CommonFlags& common, std::ostream& out)
{
    detail::require(flags.gate.empty() != flags.data.empty(),
                    "routing-mi needs exactly one of --gate or --data");
    const bool from_data = !flags.data.empty();
    if (from_data)
    {
        detail::require(flags.lambda > 0.0, "--lambda must be positive");
        prepare_outputs(common, {"routing_mi.json", "gate.csv"});
    }
    else
    {
        prepare_outputs(common, {"routing_mi.json"});
    }

    double rate = 0.0;
    std::size_t items = 0;
    std::size_t experts = 0;
    std::string gate_csv;
    if (from_data)
    {
        const auto dataset = load_dataset(flags.data);
        const Matrix losses = leading_rows(dataset.test_losses(), flags.rows);
        BaOptions options;
        options.tol = flags.tol;
        options.max_iter = flags.max_iter;
        const auto result = ba_solve(losses, flags.lambda, options);
        rate = routing_mi(result.gate);
        items = result.gate.num_items();
        experts = result.gate.num_experts();
        gate_csv = format_loss_csv(result.gate.conditional());
    }
    else
    {
        if (!fs::is_regular_file(flags.gate))
        {
            throw ValidationError("missing gate file '" + flags.gate + "'");
        }
        const GateMatrix gate(parse_loss_csv(read_file(flags.gate), flags.gate));
        rate = routing_mi(gate);
        items = gate.num_items();
        experts = gate.num_experts();
    }

    ensure_dir(common.out);
    const fs::path dir(common.out);
    if (from_data)
    {
        write_file_atomic(dir / "gate.csv", gate_csv);
    }
    write_file_atomic(dir / "routing_mi.json", format_routing_json(rate, items, experts));
    out << "I(X;T) = " << format_double(rate) << " nats\n";
    return kExitOk;
}
}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"finbank: finite expert-bank information and routing toolkit", "finbank"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "finbank 0.1.0");

    CommonFlags common;
    ExperimentFlags experiment;
    RdFlags rd;
    RoutingFlags routing;
    BankGenConfig bank;
    std::vector<double> alphas{0.0, 0.25, 0.5, 0.7, 0.9, 1.0};

    auto* gen = app.add_subcommand("gen-bank", "Generate a synthetic 0-1 expert bank");
    add_common(*gen, common);
    gen->add_option("--seed", bank.seed, "Generator seed")->capture_default_str();
    gen->add_option("--experts", bank.num_experts, "Number of experts R")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    gen->add_option("--pool", bank.num_pool, "Pool rows")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--test", bank.num_test, "Test rows")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--error-low", bank.error_rate_low, "Lowest expert error rate")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gen->add_option("--error-high", bank.error_rate_high, "Highest expert error rate")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gen->add_option("--common-noise", bank.common_noise_weight,
                    "Weight of the shared per-item difficulty")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    auto* mi = app.add_subcommand("mi", "Monte Carlo I(S;W) experiment at one alpha");
    add_common(*mi, common);
    add_experiment(*mi, experiment, true);

    auto* sweep = app.add_subcommand("alpha-sweep", "Shared-replica sweep over alpha");
    add_common(*sweep, common);
    add_experiment(*sweep, experiment, false);
    sweep->add_option("--alphas", alphas, "Comma-separated alpha grid")
        ->delimiter(',')
        ->capture_default_str();

    auto* curve = app.add_subcommand("rd-curve", "Blahut-Arimoto rate-distortion sweep");
    add_common(*curve, common);
    curve->add_option("--data", rd.data, "Dataset directory")->required();
    curve->add_option("--lambda-min", rd.lambda_min, "Smallest lambda")->capture_default_str();
    curve->add_option("--lambda-max", rd.lambda_max, "Largest lambda")->capture_default_str();
    curve->add_option("--points", rd.points, "Grid size")->check(CLI::PositiveNumber)->capture_default_str();
    curve->add_option("--tol", rd.tol, "Duality-gap tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
    curve->add_option("--max-iter", rd.max_iter, "Iteration cap per lambda")->capture_default_str();
    curve->add_option("--rows", rd.rows, "Use the first N test rows (0 = all)")->capture_default_str();

    auto* route = app.add_subcommand("routing-mi", "Plug-in I(X;T) of a gate");
    add_common(*route, common);
    route->add_option("--gate", routing.gate, "Row-stochastic gate CSV (header e0,...)");
    route->add_option("--data", routing.data, "Dataset directory; solve the gate at --lambda");
    route->add_option("--lambda", routing.lambda, "Rate weight for the solved gate")->capture_default_str();
    route->add_option("--tol", routing.tol, "Duality-gap tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
    route->add_option("--max-iter", routing.max_iter, "Iteration cap")->capture_default_str();
    route->add_option("--rows", routing.rows, "Use the first N test rows (0 = all)")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::CallForVersion&)
    {
        out << "finbank 0.1.0\n";
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try
    {
        if (*gen)
        {
            return cmd_gen_bank(bank, common, out);
        }
        if (*mi)
        {
            return cmd_mi(experiment, common, out);
        }
        if (*sweep)
        {
            return cmd_alpha_sweep(experiment, alphas, common, out);
        }
        if (*curve)
        {
            return cmd_rd_curve(rd, common, out);
        }
        return cmd_routing_mi(routing, common, out);
    }
    catch (const ValidationError& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const IoError& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitIoFailure;
    }
    catch (const std::exception& e)
    {
        err << "internal error: " << e.what() << "\n";
        return kExitIoFailure;
    }
}
}  // namespace finbank::cli

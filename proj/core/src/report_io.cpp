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

#include "finbank/report_io.hpp"

#include <nlohmann/json.hpp>

#include "finbank/number_format.hpp"

namespace finbank
{
namespace
{
void append_row(std::string& out, std::initializer_list<double> values)
{
    bool first = true;
    for (double v : values)
    {
        if (!first)
        {
            out += ',';
        }
        first = false;
        append_double(out, v);
    }
    out += '\n';
}
}  // namespace

std::string format_mi_report_json(const ExperimentReport& report)
{
    const MIReport& mi = report.mi_report;
    nlohmann::ordered_json j;
    j["alpha"] = report.config.alpha;
    j["num_experts"] = report.num_experts;
    j["m"] = report.config.m;
    j["num_replicas"] = report.config.replicas;
    j["master_seed"] = report.config.master_seed;
    j["bootstrap_resamples"] = report.config.bootstrap_resamples;
    j["ci_level"] = mi.ci_level;
    j["mean_train"] = report.mean_train;
    j["mean_test"] = report.mean_test;
    j["mean_gap"] = report.mean_gap;
    j["mean_abs_gap"] = report.mean_abs_gap;
    j["gen_hat"] = report.mean_gap;
    j["h_w"] = mi.h_w;
    j["h_w_given_s"] = mi.h_w_given_s;
    j["mi"] = mi.mi;
    j["mi_miller_madow"] = mi.mi_miller_madow;
    j["ci_low"] = mi.ci_low;
    j["ci_high"] = mi.ci_high;
    j["bound_mi"] = mi.bound_mi;
    j["bound_union"] = mi.bound_union;
    j["bound_clamped"] = mi.bound_clamped;
    j["shared_replica_sweep"] = true;
    j["marginal"] = mi.marginal;
    return j.dump(2) + "\n";
}

std::string format_alpha_sweep_csv(std::span<const ExperimentReport> reports)
{
    std::string out = kAlphaSweepHeader;
    out += '\n';
    for (const auto& r : reports)
    {
        const MIReport& mi = r.mi_report;
        append_row(out, {r.config.alpha, mi.mi, mi.mi_miller_madow, mi.ci_low, mi.ci_high,
                         mi.bound_mi, mi.bound_union, r.mean_gap, r.mean_abs_gap, r.mean_train,
                         r.mean_test});
    }
    return out;
}

std::string format_gap_hist_csv(const GapHistogram& histogram)
{
    std::string out = kGapHistHeader;
    out += '\n';
    for (std::size_t k = 0; k < histogram.counts.size(); ++k)
    {
        append_double(out, histogram.edges[k]);
        out += ',';
        append_double(out, histogram.edges[k + 1]);
        out += ',';
        out += std::to_string(histogram.counts[k]);
        out += '\n';
    }
    return out;
}

std::string format_rd_curve_csv(std::span<const RDPoint> points)
{
    std::string out = kRdCurveHeader;
    out += '\n';
    for (const auto& p : points)
    {
        append_double(out, p.lambda);
        out += ',';
        append_double(out, p.rate);
        out += ',';
        append_double(out, p.distortion);
        out += ',';
        append_double(out, p.lagrangian);
        out += ',';
        out += std::to_string(p.iterations);
        out += ',';
        out += p.converged ? "true" : "false";
        out += '\n';
    }
    return out;
}

std::string format_routing_json(double routing_mi_nats, std::size_t num_items,
                                std::size_t num_experts)
{
    nlohmann::ordered_json j;
    j["routing_mi_nats"] = routing_mi_nats;
    j["num_items"] = num_items;
    j["num_experts"] = num_experts;
    return j.dump(2) + "\n";
}
}  // namespace finbank

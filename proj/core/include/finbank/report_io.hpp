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

#include <filesystem>
#include <span>
#include <string>

#include "finbank/harness.hpp"
#include "finbank/rd_solver.hpp"

namespace finbank
{
inline constexpr const char* kAlphaSweepHeader =
    "alpha,mi_nats,mi_mm_nats,ci_low,ci_high,bound_mi,bound_union,mean_gap,mean_abs_gap,"
    "mean_train,mean_test";
inline constexpr const char* kGapHistHeader = "bin_left,bin_right,count";
inline constexpr const char* kRdCurveHeader =
    "lambda,rate_nats,distortion,lagrangian,iterations,converged";

/// All scalar fields of the report plus the marginal, as pretty JSON.
[[nodiscard]] std::string format_mi_report_json(const ExperimentReport& report);

/// One row per report, columns per kAlphaSweepHeader.
[[nodiscard]] std::string format_alpha_sweep_csv(std::span<const ExperimentReport> reports);

[[nodiscard]] std::string format_gap_hist_csv(const GapHistogram& histogram);

/// Points are written in the order given; rd_sweep already sorts by rate.
[[nodiscard]] std::string format_rd_curve_csv(std::span<const RDPoint> points);

/// Routing-information summary for one gate, as JSON.
[[nodiscard]] std::string format_routing_json(double routing_mi_nats, std::size_t num_items,
                                              std::size_t num_experts);
}  // namespace finbank

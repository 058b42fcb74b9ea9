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
#include <span>
#include <vector>

#include "finbank/gate.hpp"
#include "finbank/matrix.hpp"

namespace finbank
{
/// One sample of the empirical rate-distortion curve.
struct RDPoint
{
    double lambda = 0.0;
    double rate = 0.0;        ///< routing information at the fixed point, nats
    double distortion = 0.0;  ///< mean gated loss
    double lagrangian = 0.0;  ///< distortion + lambda * rate
    std::size_t iterations = 0;
    bool converged = false;

    // Diagnostics, not part of rd_curve.csv.
    double duality_gap = 0.0;         ///< certified upper bound on lagrangian - optimum
    std::size_t active_experts = 0;   ///< experts whose marginal did not underflow to 0
    bool monotone = true;             ///< lagrangian never increased across iterations
    double max_increase = 0.0;        ///< largest observed per-iteration increase
    double marginal_residual = 0.0;   ///< max_t |refreshed pi_t - pi_t| at the last iterate
};

struct GateObjective
{
    double avg_loss = 0.0;
    double rate = 0.0;
    double lagrangian = 0.0;
};

struct BaOptions
{
    double tol = 1e-9;
    std::size_t max_iter = 10000;
    /// Over-relaxed marginal steps, accepted only when they lower the dual
    /// objective. Off gives the textbook alternating update.
    bool accelerate = true;
    /// Keep the per-iteration lagrangian values in BaResult::trace.
    bool record_trace = false;
};

struct BaResult
{
    GateMatrix gate;
    RDPoint point;
    /// Marginal refreshed from the returned gate (the closing half-step), so
    /// it matches the gate's column means.
    std::vector<double> marginal;
    std::vector<double> trace;
};

/// Blahut-Arimoto iteration for the unrestricted gate:
///   p(t|x_i) proportional to pi_t exp(-l_{i,t} / lambda),  pi_t = mean_i p(t|x_i).
///
/// Stops once the Frank-Wolfe duality gap of the marginal problem falls below
/// `options.tol`, which bounds the distance of the reported lagrangian from
/// the optimum. Tilting is done relative to each row's minimum loss so that
/// tiny lambda cannot underflow a whole row. Experts whose marginal mass
/// underflows to exactly zero leave the support.
[[nodiscard]] BaResult ba_solve(const Matrix& losses, double lambda,
                                std::span<const double> init, const BaOptions& options = {});

/// Same, starting from the uniform marginal.
[[nodiscard]] BaResult ba_solve(const Matrix& losses, double lambda,
                                const BaOptions& options = {});

/// Mean gated loss, routing information and their lambda-weighted sum.
[[nodiscard]] GateObjective gate_objective(const GateMatrix& gate, const Matrix& losses,
                                           double lambda);

/// `points` values spaced evenly in log10 between lo and hi inclusive.
[[nodiscard]] std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Solves every lambda independently from the uniform marginal and returns
/// the points sorted by rate (ties: larger lambda first).
[[nodiscard]] std::vector<RDPoint> rd_sweep(const Matrix& losses,
                                            std::span<const double> lambdas,
                                            const BaOptions& options = {},
                                            std::size_t threads = 1);

/// Indices i where the piecewise-linear curve through the sorted points
/// bends the wrong way (slope of segment i-1 > slope of segment i).
[[nodiscard]] std::vector<std::size_t> convexity_violations(std::span<const RDPoint> sorted,
                                                            double tolerance = 1e-9);
}  // namespace finbank

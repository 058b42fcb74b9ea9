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

#include "finbank/rd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "finbank/error.hpp"
#include "finbank/estimators.hpp"
#include "finbank/parallel.hpp"

namespace finbank
{
namespace
{
constexpr double kMaxStepScale = 0x1.0p40;

// Tilted weights for one lambda, relative to each row's minimum loss:
//   w_{i,t} = exp(-(l_{i,t} - min_s l_{i,s}) / lambda),  em1 = w - 1.
// Keeping both forms lets sums that sit near 1 (large lambda) be formed
// without cancellation.
struct Tilt
{
    Matrix w;
    Matrix em1;
    Matrix scaled;  // (l - row_min) / lambda
    std::vector<double> row_min;
};

Tilt make_tilt(const Matrix& losses, double lambda)
{
    const std::size_t n = losses.rows();
    const std::size_t r = losses.cols();
    Tilt tilt{Matrix(n, r), Matrix(n, r), Matrix(n, r), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i)
    {
        auto row = losses.row(i);
        const double lo = *std::min_element(row.begin(), row.end());
        tilt.row_min[i] = lo;
        for (std::size_t t = 0; t < r; ++t)
        {
            const double a = (row[t] - lo) / lambda;
            tilt.scaled(i, t) = a;
            tilt.w(i, t) = std::exp(-a);
            tilt.em1(i, t) = std::expm1(-a);
        }
    }
    return tilt;
}

// Everything the iteration needs about one marginal pi.
struct Evaluation
{
    double dual = 0.0;  // G(pi) = -lambda mean_i log sum_t pi_t w_{i,t} (+ row minima)
    double distortion = 0.0;
    double rate = 0.0;
    double lagrangian = 0.0;
    double gap = 0.0;
    std::vector<double> log_c;  // log of mean_i w_{i,t} / Z_i, every expert
    std::vector<double> cm1;    // c_t - 1
};

class Solver
{
public:
    Solver(const Matrix& losses, double lambda)
        : losses_(losses), lambda_(lambda), tilt_(make_tilt(losses, lambda)),
          n_(losses.rows()), r_(losses.cols()), zm1_(n_), z_(n_), log_z_(n_)
    {
    }

    // G(pi) alone: one pass, used to screen candidate marginals.
    double dual(std::span<const double> pi) const
    {
        double mean_row_min = 0.0;
        double mean_log_z = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
        {
            double zm1 = 0.0;
            double z = 0.0;
            for (std::size_t t = 0; t < r_; ++t)
            {
                if (pi[t] > 0.0)
                {
                    zm1 += pi[t] * tilt_.em1(i, t);
                    z += pi[t] * tilt_.w(i, t);
                }
            }
            if (!(z > 0.0))
            {
                return std::numeric_limits<double>::infinity();
            }
            mean_row_min += tilt_.row_min[i];
            mean_log_z += std::abs(zm1) < 0.5 ? std::log1p(zm1) : std::log(z);
        }
        const auto nd = static_cast<double>(n_);
        return mean_row_min / nd - lambda_ * (mean_log_z / nd);
    }

    // G(to) - G(from), where `from` is the marginal most recently passed to
    // evaluate(). Formed from the per-row changes in Z so that differences far
    // below the rounding level of G itself keep their sign.
    double dual_change(std::span<const double> from, std::span<const double> to) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
        {
            double dz = 0.0;
            for (std::size_t t = 0; t < r_; ++t)
            {
                dz += (to[t] - from[t]) * tilt_.w(i, t);
            }
            const double ratio = dz / z_[i];
            if (!(ratio > -1.0))
            {
                return std::numeric_limits<double>::infinity();
            }
            sum += std::log1p(ratio);
        }
        return -lambda_ * (sum / static_cast<double>(n_));
    }

    // G(pi) - L(pi) = lambda KL(pi c || pi) >= 0 for the evaluated marginal.
    double dual_excess(std::span<const double> pi, const Evaluation& ev) const
    {
        double kl = 0.0;
        for (std::size_t t = 0; t < r_; ++t)
        {
            if (pi[t] > 0.0)
            {
                kl += pi[t] * (1.0 + ev.cm1[t]) * ev.log_c[t];
            }
        }
        return lambda_ * std::max(0.0, kl);
    }

    Evaluation evaluate(std::span<const double> pi, Matrix* gate_out)
    {
        Evaluation ev;
        const auto nd = static_cast<double>(n_);

        double mean_row_min = 0.0;
        double mean_log_z = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
        {
            double zm1 = 0.0;
            double z = 0.0;
            for (std::size_t t = 0; t < r_; ++t)
            {
                if (pi[t] > 0.0)
                {
                    zm1 += pi[t] * tilt_.em1(i, t);
                    z += pi[t] * tilt_.w(i, t);
                }
            }
            if (!(z > 0.0))
            {
                throw std::logic_error("ba_solve: row " + std::to_string(i) +
                                       " has no mass after tilting");
            }
            zm1_[i] = zm1;
            z_[i] = z;
            log_z_[i] = std::abs(zm1) < 0.5 ? std::log1p(zm1) : std::log(z);
            mean_row_min += tilt_.row_min[i];
            mean_log_z += log_z_[i];
        }
        mean_row_min /= nd;
        mean_log_z /= nd;
        ev.dual = mean_row_min - lambda_ * mean_log_z;

        ev.cm1.assign(r_, 0.0);
        for (std::size_t i = 0; i < n_; ++i)
        {
            const bool near_one = std::abs(zm1_[i]) < 0.5;
            for (std::size_t t = 0; t < r_; ++t)
            {
                const double diff = near_one ? tilt_.em1(i, t) - zm1_[i] : tilt_.w(i, t) - z_[i];
                ev.cm1[t] += diff / z_[i];
            }
        }
        ev.log_c.resize(r_);
        double max_cm1 = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < r_; ++t)
        {
            ev.cm1[t] /= nd;
            ev.log_c[t] = std::log1p(ev.cm1[t]);
            max_cm1 = std::max(max_cm1, ev.cm1[t]);
        }
        ev.gap = std::max(0.0, lambda_ * max_cm1);

        // Gate, distortion and rate. log(p / pi_hat) is assembled from the
        // pieces above so that it stays accurate when p is close to pi_hat.
        double distortion = 0.0;
        double rate = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
        {
            auto loss_row = losses_.row(i);
            for (std::size_t t = 0; t < r_; ++t)
            {
                double p = 0.0;
                if (pi[t] > 0.0)
                {
                    p = pi[t] * tilt_.w(i, t) / z_[i];
                    if (p > 0.0)
                    {
                        distortion += p * loss_row[t];
                        rate += p * (-tilt_.scaled(i, t) - log_z_[i] - ev.log_c[t]);
                    }
                }
                if (gate_out != nullptr)
                {
                    (*gate_out)(i, t) = p;
                }
            }
        }
        ev.distortion = distortion / nd;
        ev.rate = std::max(0.0, rate / nd);
        ev.lagrangian = ev.distortion + lambda_ * ev.rate;
        return ev;
    }

    // pi_t <- pi_t c_t^step, renormalised in the log domain. step = 1 is the
    // plain marginal refresh applied to the freshly tilted gate.
    std::vector<double> step(std::span<const double> pi, const Evaluation& ev, double scale) const
    {
        std::vector<double> log_pi(r_, -std::numeric_limits<double>::infinity());
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < r_; ++t)
        {
            if (pi[t] > 0.0)
            {
                log_pi[t] = std::log(pi[t]) + scale * ev.log_c[t];
                top = std::max(top, log_pi[t]);
            }
        }
        std::vector<double> next(r_, 0.0);
        double sum = 0.0;
        for (std::size_t t = 0; t < r_; ++t)
        {
            if (pi[t] > 0.0)
            {
                next[t] = std::exp(log_pi[t] - top);
                sum += next[t];
            }
        }
        for (double& v : next)
        {
            v /= sum;
        }
        return next;
    }

    [[nodiscard]] std::size_t experts() const noexcept { return r_; }

private:
    const Matrix& losses_;
    double lambda_;
    Tilt tilt_;
    std::size_t n_;
    std::size_t r_;
    std::vector<double> zm1_;
    std::vector<double> z_;
    std::vector<double> log_z_;
};

std::size_t count_active(std::span<const double> pi)
{
    return static_cast<std::size_t>(std::count_if(pi.begin(), pi.end(), [](double v) { return v > 0.0; }));
}

void check_losses(const Matrix& losses)
{
    detail::require(losses.rows() >= 1 && losses.cols() >= 1, "loss matrix must be non-empty");
    for (double v : losses.data())
    {
        detail::require(v >= 0.0 && v <= 1.0, "loss entries must lie in [0,1]");
    }
}
}  // namespace

BaResult ba_solve(const Matrix& losses, double lambda, std::span<const double> init,
                  const BaOptions& options)
{
    detail::require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive and finite");
    detail::require(options.tol >= 0.0, "tolerance must be nonnegative");
    check_losses(losses);
    detail::require(init.size() == losses.cols(), "initial marginal has the wrong length");
    double init_sum = 0.0;
    for (double v : init)
    {
        detail::require(v > 0.0, "initial marginal must be strictly positive");
        init_sum += v;
    }
    detail::require(std::abs(init_sum - 1.0) <= 1e-9, "initial marginal must sum to 1");

    Solver solver(losses, lambda);
    std::vector<double> pi(init.begin(), init.end());
    for (double& v : pi)
    {
        v /= init_sum;
    }

    BaResult result{GateMatrix(Matrix(1, 1, 1.0)), RDPoint{}, {}, {}};
    RDPoint& point = result.point;
    point.lambda = lambda;

    Evaluation current = solver.evaluate(pi, nullptr);
    if (options.record_trace)
    {
        result.trace.push_back(current.lagrangian);
    }

    double scale = 1.0;
    std::size_t iter = 0;
    while (true)
    {
        if (current.gap <= options.tol)
        {
            point.converged = true;
            break;
        }
        if (iter >= options.max_iter)
        {
            break;
        }
        ++iter;

        // Any marginal whose dual value does not exceed the current
        // lagrangian keeps the lagrangian sequence nonincreasing; the plain
        // refresh always qualifies. The comparison is made on differences,
        // which stay meaningful near the optimum.
        std::vector<double> next;
        if (options.accelerate && scale > 1.0)
        {
            auto bold = solver.step(pi, current, scale);
            if (solver.dual_change(pi, bold) <= -solver.dual_excess(pi, current))
            {
                next = std::move(bold);
                scale = std::min(scale * 2.0, kMaxStepScale);
            }
            else
            {
                scale = std::max(1.0, scale / 4.0);
            }
        }
        else if (options.accelerate)
        {
            scale = 2.0;
        }
        if (next.empty())
        {
            next = solver.step(pi, current, 1.0);
        }
        Evaluation next_ev = solver.evaluate(next, nullptr);

        // An expert that left the support but now has c_t > 1 would lower the
        // objective if readmitted; give it a little mass back.
        const std::size_t best =
            static_cast<std::size_t>(std::max_element(next_ev.cm1.begin(), next_ev.cm1.end()) -
                                     next_ev.cm1.begin());
        if (next[best] == 0.0 && lambda * next_ev.cm1[best] > options.tol)
        {
            for (double eps = 1e-3; eps >= 1e-12; eps *= 1e-3)
            {
                std::vector<double> readmit(next);
                for (double& v : readmit)
                {
                    v *= 1.0 - eps;
                }
                readmit[best] = eps;
                if (solver.dual_change(next, readmit) <= 0.0)
                {
                    next = std::move(readmit);
                    next_ev = solver.evaluate(next, nullptr);
                    scale = 1.0;
                    break;
                }
            }
        }

        const double increase = next_ev.lagrangian - current.lagrangian;
        if (increase > 1e-12 * std::max(1.0, std::abs(current.lagrangian)))
        {
            point.monotone = false;
        }
        point.max_increase = std::max(point.max_increase, increase);

        pi = std::move(next);
        current = std::move(next_ev);
        if (options.record_trace)
        {
            result.trace.push_back(current.lagrangian);
        }
    }

    Matrix gate(losses.rows(), losses.cols());
    current = solver.evaluate(pi, &gate);
    result.gate = GateMatrix(std::move(gate));

    point.rate = current.rate;
    point.distortion = current.distortion;
    point.lagrangian = point.distortion + lambda * point.rate;
    point.iterations = iter;
    point.duality_gap = current.gap;
    point.active_experts = count_active(pi);
    result.marginal.resize(pi.size());
    for (std::size_t t = 0; t < pi.size(); ++t)
    {
        const double delta = pi[t] * current.cm1[t];
        result.marginal[t] = pi[t] + delta;
        point.marginal_residual = std::max(point.marginal_residual, std::abs(delta));
    }
    return result;
}

BaResult ba_solve(const Matrix& losses, double lambda, const BaOptions& options)
{
    detail::require(losses.cols() >= 1, "loss matrix must have at least one expert");
    const std::vector<double> uniform(losses.cols(), 1.0 / static_cast<double>(losses.cols()));
    return ba_solve(losses, lambda, uniform, options);
}

GateObjective gate_objective(const GateMatrix& gate, const Matrix& losses, double lambda)
{
    detail::require(gate.num_items() == losses.rows() && gate.num_experts() == losses.cols(),
                    "gate and loss matrix dimensions disagree");
    const Matrix& cond = gate.conditional();
    double total = 0.0;
    for (std::size_t i = 0; i < cond.rows(); ++i)
    {
        auto p = cond.row(i);
        auto l = losses.row(i);
        for (std::size_t t = 0; t < p.size(); ++t)
        {
            total += p[t] * l[t];
        }
    }
    GateObjective obj;
    obj.avg_loss = total / static_cast<double>(cond.rows());
    obj.rate = routing_mi(gate);
    obj.lagrangian = obj.avg_loss + lambda * obj.rate;
    return obj;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points)
{
    detail::require(points >= 1, "grid needs at least one point");
    detail::require(lo > 0.0 && hi > 0.0, "grid bounds must be positive");
    detail::require(lo <= hi, "grid lower bound exceeds upper bound");
    std::vector<double> grid(points);
    if (points == 1)
    {
        grid[0] = lo;
        return grid;
    }
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t k = 0; k < points; ++k)
    {
        const double f = static_cast<double>(k) / static_cast<double>(points - 1);
        grid[k] = std::pow(10.0, a + f * (b - a));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<RDPoint> rd_sweep(const Matrix& losses, std::span<const double> lambdas,
                              const BaOptions& options, std::size_t threads)
{
    detail::require(!lambdas.empty(), "lambda grid is empty");
    for (double lambda : lambdas)
    {
        detail::require(lambda > 0.0 && std::isfinite(lambda), "lambda values must be positive");
    }
    check_losses(losses);

    std::vector<RDPoint> points(lambdas.size());
    BaOptions point_options = options;
    point_options.record_trace = false;
    parallel_for(lambdas.size(), threads, [&](std::size_t k) {
        points[k] = ba_solve(losses, lambdas[k], point_options).point;
    });
    std::stable_sort(points.begin(), points.end(), [](const RDPoint& a, const RDPoint& b) {
        if (a.rate != b.rate)
        {
            return a.rate < b.rate;
        }
        return a.lambda > b.lambda;
    });
    return points;
}

std::vector<std::size_t> convexity_violations(std::span<const RDPoint> sorted, double tolerance)
{
    std::vector<std::size_t> bad;
    for (std::size_t k = 1; k + 1 < sorted.size(); ++k)
    {
        const double dr0 = sorted[k].rate - sorted[k - 1].rate;
        const double dr1 = sorted[k + 1].rate - sorted[k].rate;
        if (dr0 <= tolerance || dr1 <= tolerance)
        {
            continue;
        }
        const double s0 = (sorted[k].distortion - sorted[k - 1].distortion) / dr0;
        const double s1 = (sorted[k + 1].distortion - sorted[k].distortion) / dr1;
        if (s0 > s1 + tolerance)
        {
            bad.push_back(k);
        }
    }
    return bad;
}
}  // namespace finbank

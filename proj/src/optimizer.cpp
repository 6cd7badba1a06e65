// SPDX-License-Identifier: Apache-2.0
//
// starris - rate analysis and passive beamforming for STAR-RIS massive MIMO
// Copyright (C) 2026 The starris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "starris/optimizer.hpp"
#include "starris/parallel.hpp"

#include <cmath>
#include <numbers>

namespace starris
{

void PgamOptions::validate() const
{
    if (!(mu_init > 0.0))
        throw std::invalid_argument("PgamOptions: mu_init must be positive.");
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::invalid_argument("PgamOptions: kappa must lie in (0, 1).");
    if (!(tol >= 0.0))
        throw std::invalid_argument("PgamOptions: tol must be non-negative.");
    if (max_iters < 1 || max_backtracks < 0)
        throw std::invalid_argument("PgamOptions: iteration limits must be positive.");
    if (n_starts < 1)
        throw std::invalid_argument("PgamOptions: n_starts must be at least 1.");
}

std::string to_string(StopReason reason)
{
    switch (reason)
    {
    case StopReason::tolerance:
        return "tolerance";
    case StopReason::max_iterations:
        return "max-iterations";
    case StopReason::line_search_stall:
        return "line-search stall";
    }
    return "unknown";
}

StackedPoint StackedPoint::from(const StarConfig &config)
{
    const int n = config.size();
    StackedPoint p{CVec(2 * n), RVec(2 * n)};
    p.theta << config.theta_t, config.theta_r;
    p.beta << config.beta_t, config.beta_r;
    return p;
}

StarConfig StackedPoint::to_config(Protocol protocol) const
{
    const Eigen::Index n = theta.size() / 2;
    return StarConfig{theta.head(n), theta.tail(n), beta.head(n), beta.tail(n), protocol};
}

CVec project_theta(const CVec &v)
{
    CVec out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        const double mag = std::abs(v(i));
        out(i) = mag > 0.0 ? v(i) / mag : cdouble(1.0, 0.0);
    }
    return out;
}

RVec project_beta(const RVec &v)
{
    if (v.size() % 2 != 0)
        throw std::invalid_argument("project_beta: stacked amplitude vector must have even length.");
    const Eigen::Index n = v.size() / 2;
    RVec out(v.size());
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double norm = std::hypot(v(i), v(i + n));
        if (norm > 0.0)
        {
            out(i) = v(i) / norm;
            out(i + n) = v(i + n) / norm;
        }
        else
        {
            out(i) = std::sqrt(0.5);
            out(i + n) = std::sqrt(0.5);
        }
    }
    return out;
}

double quadratic_model(double f_old, const GradientPair &grad, const StackedPoint &new_point,
                       const StackedPoint &old_point, double mu)
{
    const CVec d_theta = new_point.theta - old_point.theta;
    const RVec d_beta = new_point.beta - old_point.beta;
    const double sq = d_theta.squaredNorm() + d_beta.squaredNorm();
    const double linear = 2.0 * grad.d_theta.dot(d_theta).real() + grad.d_beta.dot(d_beta);
    return f_old + linear - sq / mu;
}

bool armijo_condition(double f_new, double f_old, const GradientPair &grad, const StackedPoint &new_point,
                      const StackedPoint &old_point, double mu)
{
    return f_new > quadratic_model(f_old, grad, new_point, old_point, mu);
}

namespace
{

double checked_objective(const StarConfig &config, const System &system)
{
    const double f = sum_se(config, system).sum_se;
    if (!std::isfinite(f))
        throw OptimizerError("pgam: objective is not finite.", config);
    return f;
}

// Squared displacement below which the projected step is treated as no move at all.
constexpr double stationary_displacement = 1e-28;

} // namespace

PgamTrace pgam(const System &system, const PgamOptions &options, const StarConfig &init)
{
    options.validate();
    system.validate();
    if (init.size() != system.num_elements())
        throw std::invalid_argument("pgam: initial configuration does not match the surface size.");

    StackedPoint x = StackedPoint::from(init);
    x.theta = project_theta(x.theta);
    x.beta = project_beta(x.beta);
    const Protocol protocol = init.protocol;
    StarConfig config = x.to_config(protocol);

    PgamTrace trace;
    double f = checked_objective(config, system);
    trace.objectives.push_back(f);
    trace.feasibility.push_back(config.feasibility_error());

    double mu = options.mu_init;
    bool stopped = false;
    for (int iter = 0; iter < options.max_iters && !stopped; ++iter)
    {
        GradientPair grad = grad_objective(config, system);
        if (!grad.d_theta.allFinite() || !grad.d_beta.allFinite())
            throw OptimizerError("pgam: gradient is not finite.", config);
        if (!options.optimize_phases)
            grad.d_theta.setZero();
        if (!options.optimize_amplitudes)
            grad.d_beta.setZero();

        int backtracks = 0;
        bool accepted = false;
        StackedPoint candidate;
        double f_new = f;
        while (true)
        {
            candidate.theta = options.optimize_phases ? project_theta(x.theta + mu * grad.d_theta) : x.theta;
            candidate.beta = options.optimize_amplitudes ? project_beta(x.beta + mu * grad.d_beta) : x.beta;

            const double moved = (candidate.theta - x.theta).squaredNorm() + (candidate.beta - x.beta).squaredNorm();
            if (moved <= stationary_displacement)
            {
                // the projected step is a fixed point: nothing left to gain
                candidate = x;
                f_new = f;
                accepted = true;
                break;
            }

            f_new = checked_objective(candidate.to_config(protocol), system);
            if (armijo_condition(f_new, f, grad, candidate, x, mu) && f_new >= f)
            {
                accepted = true;
                break;
            }
            if (backtracks == options.max_backtracks)
                break;
            mu *= options.kappa;
            ++backtracks;
        }

        if (!accepted)
        {
            trace.reason = StopReason::line_search_stall;
            stopped = true;
            break;
        }

        const double increase = f_new - f;
        x = std::move(candidate);
        config = x.to_config(protocol);
        f = f_new;
        trace.objectives.push_back(f);
        trace.step_sizes.push_back(mu);
        trace.backtrack_counts.push_back(backtracks);
        trace.feasibility.push_back(config.feasibility_error());

        if (increase < options.tol)
        {
            trace.reason = StopReason::tolerance;
            trace.converged = true;
            stopped = true;
        }
    }
    if (!stopped)
        trace.reason = StopReason::max_iterations;

    trace.final_config = config.canonical();
    return trace;
}

StarConfig initial_point(int num_elements, std::uint64_t seed, int index)
{
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(index)));
    StarConfig config = StarConfig::random_phases(num_elements, rng);
    if (index > 0)
    {
        std::uniform_real_distribution<double> split(0.0, 0.5 * std::numbers::pi);
        for (int n = 0; n < num_elements; ++n)
        {
            const double angle = split(rng);
            config.beta_t(n) = std::cos(angle);
            config.beta_r(n) = std::sin(angle);
        }
    }
    return config;
}

MultiStartResult run_multi_start(const System &system, const PgamOptions &options)
{
    return run_multi_start(system, options,
                           [&](int index) { return initial_point(system.num_elements(), options.seed, index); });
}

MultiStartResult run_multi_start(const System &system, const PgamOptions &options,
                                 const std::function<StarConfig(int)> &init)
{
    options.validate();
    const auto count = static_cast<std::size_t>(options.n_starts);
    std::vector<PgamTrace> traces(count);
    std::vector<std::exception_ptr> errors(count);
    std::vector<char> ok(count, 0);

    parallel_for(count, options.threads, [&](std::size_t s) {
        try
        {
            const auto index = static_cast<int>(s);
            traces[s] = pgam(system, options, init(index));
            traces[s].start_index = index;
            ok[s] = 1;
        }
        catch (const NumericalError &)
        {
            errors[s] = std::current_exception();
        }
    });

    MultiStartResult out;
    int best = -1;
    for (std::size_t s = 0; s < count; ++s)
        if (ok[s] && (best < 0 || traces[s].final_objective() > traces[static_cast<std::size_t>(best)].final_objective()))
            best = static_cast<int>(s);
    if (best < 0)
        std::rethrow_exception(errors.front());

    out.best = best;
    for (std::size_t s = 0; s < count; ++s)
        if (ok[s])
            out.traces.push_back(std::move(traces[s]));
    // index into the surviving traces
    for (std::size_t i = 0; i < out.traces.size(); ++i)
        if (out.traces[i].start_index == best)
            out.best = static_cast<int>(i);
    return out;
}

PgamTrace multi_start(const System &system, const PgamOptions &options)
{
    auto result = run_multi_start(system, options);
    return std::move(result.traces[static_cast<std::size_t>(result.best)]);
}

StarConfig round_to_ms(const StarConfig &es_config)
{
    StarConfig out = es_config.canonical();
    for (int n = 0; n < out.size(); ++n)
    {
        const bool transmit = std::abs(out.beta_t(n)) >= std::abs(out.beta_r(n));
        out.beta_t(n) = transmit ? 1.0 : 0.0;
        out.beta_r(n) = transmit ? 0.0 : 1.0;
    }
    out.protocol = Protocol::mode_switching;
    return out;
}

} // namespace starris

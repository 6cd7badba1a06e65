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

#include <catch_amalgamated.hpp>

#include "starris/optimizer.hpp"
#include "test_support.hpp"

#include <cmath>
#include <limits>

using namespace starris;
using starris_test::random_config;
using starris_test::random_system;

namespace
{

void check_trace_invariants(const PgamTrace &trace, const PgamOptions &options)
{
    REQUIRE(trace.objectives.size() == static_cast<std::size_t>(trace.iterations() + 1));
    CHECK(trace.iterations() <= options.max_iters);
    for (double f : trace.feasibility)
        CHECK(f <= 1e-10);
    for (std::size_t i = 1; i < trace.objectives.size(); ++i)
        CHECK(trace.objectives[i] >= trace.objectives[i - 1]);
    for (int b : trace.backtrack_counts)
        CHECK(b <= options.max_backtracks);
    CHECK(trace.final_config.feasibility_error() <= 1e-10);
}

bool same_trace(const PgamTrace &a, const PgamTrace &b)
{
    return a.objectives == b.objectives && a.step_sizes == b.step_sizes && a.backtrack_counts == b.backtrack_counts &&
           a.final_config.theta_t == b.final_config.theta_t && a.final_config.theta_r == b.final_config.theta_r &&
           a.final_config.beta_t == b.final_config.beta_t && a.final_config.beta_r == b.final_config.beta_r &&
           a.reason == b.reason;
}

} // namespace

TEST_CASE("optimizer - Phase projection")
{
    CVec v(3);
    v << cdouble(2.0, 0.0), cdouble(3.0, 4.0), cdouble(0.0, 0.0);
    const CVec p = project_theta(v);
    CHECK(p(0) == cdouble(1.0, 0.0));
    CHECK(std::abs(p(1) - cdouble(0.6, 0.8)) < 1e-15);
    CHECK(p(2) == cdouble(1.0, 0.0));

    Rng rng(1);
    const CVec w = complex_normal_vector(100, rng);
    const CVec q = project_theta(w);
    for (Eigen::Index i = 0; i < q.size(); ++i)
    {
        CHECK(std::abs(std::abs(q(i)) - 1.0) < 1e-15);
        CHECK(std::abs(std::arg(q(i)) - std::arg(w(i))) < 1e-12);
    }
}

TEST_CASE("optimizer - Amplitude projection")
{
    RVec v(6);
    v << 3.0, -1.0, 0.0, 4.0, 0.0, 0.0;
    const RVec p = project_beta(v);
    CHECK(std::abs(p(0) - 0.6) < 1e-15);
    CHECK(std::abs(p(3) - 0.8) < 1e-15);
    CHECK(p(1) == -1.0);
    CHECK(p(4) == 0.0);
    CHECK(p(2) == std::sqrt(0.5));
    CHECK(p(5) == std::sqrt(0.5));

    CHECK_THROWS_AS(project_beta(RVec::Ones(3)), std::invalid_argument);
}

TEST_CASE("optimizer - Sufficient increase test")
{
    Rng rng(2);
    const auto sys = random_system({3, 2, 2, 1, 1}, rng);
    const auto cfg = random_config(4, rng);
    const auto grad = grad_objective(cfg, sys);
    const auto x = StackedPoint::from(cfg);

    CHECK(quadratic_model(1.5, grad, x, x, 0.3) == 1.5);
    CHECK_FALSE(armijo_condition(1.5, 1.5, grad, x, x, 0.3));
    CHECK(armijo_condition(1.6, 1.5, grad, x, x, 0.3));

    StackedPoint y = x;
    y.theta = project_theta(x.theta + 0.1 * grad.d_theta);
    y.beta = project_beta(x.beta + 0.1 * grad.d_beta);
    CHECK(armijo_condition(-1e6, 0.0, grad, y, x, 1e-300));

    // inner product on the complex block is 2 Re{x^H y}
    StackedPoint z = x;
    z.theta(0) += cdouble(0.0, 1e-3);
    const double expected = 2.0 * (std::conj(grad.d_theta(0)) * cdouble(0.0, 1e-3)).real() - 1e-6 / 2.0;
    CHECK(std::abs(quadratic_model(0.0, grad, z, x, 2.0) - expected) < 1e-15);
}

TEST_CASE("optimizer - Options validation")
{
    PgamOptions o;
    CHECK_NOTHROW(o.validate());
    CHECK(o.tol == 1e-5);
    CHECK(o.max_iters == 200);
    CHECK(o.n_starts == 5);
    auto bad = o;
    bad.mu_init = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = o;
    bad.kappa = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = o;
    bad.n_starts = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = o;
    bad.max_iters = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("optimizer - Trace invariants on random instances")
{
    Rng rng(3);
    PgamOptions options;
    options.max_iters = 60;
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto sys = random_system({4, 2, 3, 2, 2}, rng, trial % 3 == 0);
        const auto init = random_config(6, rng);
        const auto trace = pgam(sys, options, init);
        INFO("trial " << trial << " reason " << to_string(trace.reason));
        check_trace_invariants(trace, options);
        CHECK(trace.final_objective() >= trace.objectives.front());
        CHECK(std::abs(sum_se(trace.final_config, sys).sum_se - trace.final_objective()) <=
              1e-12 * trace.final_objective());
    }
}

TEST_CASE("optimizer - Infeasible starts are projected first")
{
    Rng rng(4);
    const auto sys = random_system({3, 2, 2, 1, 1}, rng);
    auto init = random_config(4, rng);
    init.theta_t *= 3.0;
    init.beta_r *= 0.1;
    PgamOptions options;
    options.max_iters = 5;
    const auto trace = pgam(sys, options, init);
    check_trace_invariants(trace, options);
    CHECK(trace.feasibility.front() <= 1e-10);
}

TEST_CASE("optimizer - Uncorrelated surface only moves amplitudes")
{
    Rng rng(5);
    const auto sys = random_system({4, 2, 3, 2, 2}, rng, true);
    const auto init = random_config(6, rng);
    PgamOptions options;
    options.max_iters = 40;
    const auto trace = pgam(sys, options, init);
    check_trace_invariants(trace, options);
    // canonical signs may add pi to a phase, nothing else
    for (Region u : {Region::transmission, Region::reflection})
        for (int n = 0; n < 6; ++n)
        {
            const cdouble ratio = trace.final_config.theta(u)(n) * std::conj(init.theta(u)(n));
            CHECK(std::abs(ratio.imag()) < 1e-12);
        }

    PgamOptions frozen = options;
    frozen.optimize_phases = false;
    const auto amp_only = pgam(sys, frozen, init);
    CHECK(std::abs(amp_only.final_objective() - trace.final_objective()) <= 1e-9 * trace.final_objective());
}

TEST_CASE("optimizer - No cascaded gain stops at the first iteration")
{
    Rng rng(6);
    auto sys = random_system({4, 2, 2, 2, 1}, rng);
    sys.stats.gains = LinkGains::make(0.0, sys.stats.gains.beta_bar, sys.stats.gains.beta_tilde);
    const auto trace = pgam(sys, PgamOptions{}, random_config(4, rng));
    CHECK(trace.iterations() == 1);
    CHECK(trace.reason == StopReason::tolerance);
    CHECK(trace.converged);
    CHECK(trace.objectives[1] == trace.objectives[0]);
}

TEST_CASE("optimizer - Line-search stall rejects the iteration")
{
    Rng rng(7);
    const auto sys = random_system({4, 2, 2, 1, 2}, rng);
    const auto init = random_config(4, rng);
    PgamOptions options;
    options.max_backtracks = 0;
    options.mu_init = 1e12;
    const auto trace = pgam(sys, options, init);
    check_trace_invariants(trace, options);
    CHECK(std::abs(sum_se(trace.final_config, sys).sum_se - trace.final_objective()) <=
          1e-12 * trace.final_objective());
    if (trace.reason == StopReason::line_search_stall && trace.iterations() == 0)
    {
        const auto x = StackedPoint::from(init);
        const auto expected = StackedPoint{project_theta(x.theta), project_beta(x.beta)}.to_config().canonical();
        CHECK(trace.final_config.theta_t == expected.theta_t);
        CHECK(trace.final_config.beta_r == expected.beta_r);
    }
    // a tiny step budget cannot stall away the monotonicity guarantee
    options.max_backtracks = 2;
    options.max_iters = 30;
    check_trace_invariants(pgam(sys, options, init), options);
}

TEST_CASE("optimizer - Stall reason is reachable")
{
    Rng rng(8);
    PgamOptions options;
    options.max_backtracks = 0;
    options.mu_init = 1e12;
    int stalls = 0;
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto sys = random_system({4, 2, 2, 1, 2}, rng);
        const auto trace = pgam(sys, options, random_config(4, rng));
        if (trace.reason == StopReason::line_search_stall)
        {
            ++stalls;
            CHECK_FALSE(trace.converged);
        }
    }
    CHECK(stalls > 0);
}

TEST_CASE("optimizer - Reproducible multi-start")
{
    Rng rng(9);
    const auto sys = random_system({5, 2, 3, 2, 2}, rng);
    PgamOptions options;
    options.max_iters = 30;
    options.seed = 77;
    options.threads = 1;
    const auto a = run_multi_start(sys, options);
    const auto b = run_multi_start(sys, options);
    options.threads = 4;
    const auto c = run_multi_start(sys, options);
    REQUIRE(a.traces.size() == 5);
    REQUIRE(c.traces.size() == 5);
    CHECK(a.best == b.best);
    CHECK(a.best == c.best);
    for (std::size_t s = 0; s < a.traces.size(); ++s)
    {
        CHECK(same_trace(a.traces[s], b.traces[s]));
        CHECK(same_trace(a.traces[s], c.traces[s]));
        CHECK(a.traces[s].start_index == static_cast<int>(s));
    }

    for (const auto &t : a.traces)
    {
        CHECK(a.traces[static_cast<std::size_t>(a.best)].final_objective() >= t.final_objective());
        CHECK(t.final_objective() >= t.objectives.front());
        check_trace_invariants(t, options);
    }
    CHECK(same_trace(multi_start(sys, options), a.traces[static_cast<std::size_t>(a.best)]));
}

TEST_CASE("optimizer - Single start equals a plain run")
{
    Rng rng(10);
    const auto sys = random_system({4, 2, 2, 1, 2}, rng);
    PgamOptions options;
    options.n_starts = 1;
    options.seed = 5;
    options.max_iters = 25;
    const auto ms = multi_start(sys, options);
    const auto single = pgam(sys, options, initial_point(4, 5, 0));
    CHECK(same_trace(ms, single));
}

TEST_CASE("optimizer - Initial points")
{
    const auto first = initial_point(9, 3, 0);
    CHECK(first.feasibility_error() < 1e-12);
    for (int n = 0; n < 9; ++n)
    {
        CHECK(first.beta_t(n) == std::sqrt(0.5));
        CHECK(first.beta_r(n) == std::sqrt(0.5));
    }
    const auto later = initial_point(9, 3, 2);
    CHECK(later.feasibility_error() < 1e-12);
    CHECK(later.beta_t != first.beta_t);
    CHECK((later.beta_t.array() >= 0.0).all());
    const auto again = initial_point(9, 3, 2);
    CHECK(again.theta_t == later.theta_t);
    CHECK(initial_point(9, 4, 2).theta_t != later.theta_t);
}

TEST_CASE("optimizer - Rounding to mode switching")
{
    StarConfig es = StarConfig::uniform(3);
    es.beta_t << 0.9, std::sqrt(0.5), -0.2;
    es.beta_r << std::sqrt(1.0 - 0.81), std::sqrt(0.5), std::sqrt(1.0 - 0.04);
    const auto ms = round_to_ms(es);
    CHECK(ms.protocol == Protocol::mode_switching);
    CHECK(ms.beta_t(0) == 1.0);
    CHECK(ms.beta_r(0) == 0.0);
    CHECK(ms.beta_t(1) == 1.0);
    CHECK(ms.beta_r(1) == 0.0);
    CHECK(ms.beta_t(2) == 0.0);
    CHECK(ms.beta_r(2) == 1.0);
    CHECK_NOTHROW(ms.validate());
    CHECK(ms.theta_r == es.theta_r);
}

TEST_CASE("optimizer - Mode switching never beats energy splitting")
{
    Rng rng(11);
    PgamOptions options;
    options.max_iters = 60;
    options.n_starts = 3;
    for (int trial = 0; trial < 4; ++trial)
    {
        const auto sys = random_system({4, 2, 3, 2, 2}, rng);
        const auto best = multi_start(sys, options);
        const double es = best.final_objective();
        const double ms = sum_se(round_to_ms(best.final_config), sys).sum_se;
        // equal when the energy split already converged to binary amplitudes
        CHECK(ms <= es * (1.0 + 1e-10));
    }
}

TEST_CASE("optimizer - Sign equivalence of the final configuration")
{
    Rng rng(12);
    const auto sys = random_system({4, 2, 3, 2, 2}, rng);
    PgamOptions options;
    options.max_iters = 30;
    const auto trace = pgam(sys, options, random_config(6, rng));
    StarConfig flipped = trace.final_config;
    for (int n : {0, 2, 5})
    {
        flipped.beta_t(n) = -flipped.beta_t(n);
        flipped.theta_t(n) = -flipped.theta_t(n);
        flipped.beta_r(n) = -flipped.beta_r(n);
        flipped.theta_r(n) = -flipped.theta_r(n);
    }
    const double f0 = sum_se(trace.final_config, sys).sum_se;
    CHECK(std::abs(sum_se(flipped, sys).sum_se - f0) <= 1e-10 * f0);
    CHECK((trace.final_config.beta_t.array() >= 0.0).all());
    CHECK((trace.final_config.beta_r.array() >= 0.0).all());
}

TEST_CASE("optimizer - Input errors")
{
    Rng rng(13);
    const auto sys = random_system({3, 2, 2, 1, 1}, rng);
    CHECK_THROWS_AS(pgam(sys, PgamOptions{}, random_config(9, rng)), std::invalid_argument);
    PgamOptions bad;
    bad.kappa = 0.0;
    CHECK_THROWS_AS(pgam(sys, bad, random_config(4, rng)), std::invalid_argument);
}

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

#pragma once

#include "starris/gradients.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace starris
{

struct PgamOptions
{
    double mu_init = 1.0;     ///< initial step size
    double kappa = 0.5;       ///< backtracking factor in (0, 1)
    double tol = 1e-5;        ///< stop once the objective increases by less than this
    int max_iters = 200;
    int max_backtracks = 60;
    int n_starts = 5;
    std::uint64_t seed = 1;
    bool optimize_phases = true;
    bool optimize_amplitudes = true;
    unsigned threads = 0; ///< workers for multi-start, 0 = hardware concurrency

    void validate() const;
};

enum class StopReason
{
    tolerance,
    max_iterations,
    line_search_stall
};

std::string to_string(StopReason reason);

/// History of one projected-gradient run. objectives[0] is the value at the (projected) start point,
/// objectives[n] the value after accepted iteration n.
struct PgamTrace
{
    std::vector<double> objectives;
    std::vector<double> step_sizes;
    std::vector<int> backtrack_counts;
    std::vector<double> feasibility; ///< constraint residual of every iterate, start included
    StarConfig final_config;
    bool converged = false;
    StopReason reason = StopReason::max_iterations;
    int start_index = 0;

    int iterations() const { return static_cast<int>(step_sizes.size()); }
    double final_objective() const { return objectives.back(); }
};

/// Raised when the objective or its gradient is not finite; carries the offending iterate.
class OptimizerError : public NumericalError
{
  public:
    OptimizerError(const std::string &what, StarConfig iterate)
        : NumericalError(what), iterate_(std::move(iterate))
    {
    }
    const StarConfig &iterate() const { return iterate_; }

  private:
    StarConfig iterate_;
};

/// Optimisation variables stacked as theta = [theta_t; theta_r], beta = [beta_t; beta_r].
struct StackedPoint
{
    CVec theta;
    RVec beta;

    static StackedPoint from(const StarConfig &config);
    StarConfig to_config(Protocol protocol = Protocol::energy_splitting) const;
};

/// Element-wise v / |v|; a zero entry maps to 1.
CVec project_theta(const CVec &v);

/// Normalise each pair (v_i, v_{i+N}) onto the unit circle, signs kept; a zero pair maps to
/// (sqrt(0.5), sqrt(0.5)).
RVec project_beta(const RVec &v);

/// Quadratic model f + <g_theta, x - theta> - |x - theta|^2 / mu + <g_beta, y - beta> - |y - beta|^2 / mu
/// with <a, b> = 2 Re{a^H b} on the complex block.
double quadratic_model(double f_old, const GradientPair &grad, const StackedPoint &new_point,
                       const StackedPoint &old_point, double mu);

/// Sufficient-increase test of the line search: f_new > quadratic model.
bool armijo_condition(double f_new, double f_old, const GradientPair &grad, const StackedPoint &new_point,
                      const StackedPoint &old_point, double mu);

/// Projected gradient ascent with backtracking on a shared step for phases and amplitudes.
PgamTrace pgam(const System &system, const PgamOptions &options, const StarConfig &init);

/// Starting point of start `index`: start 0 is the equal split with random phases, later starts draw
/// the phases and the energy split at random.
StarConfig initial_point(int num_elements, std::uint64_t seed, int index);

struct MultiStartResult
{
    std::vector<PgamTrace> traces; ///< one per start, in start order
    int best = 0;
};

/// Run every start (in parallel) and pick the largest final objective, ties to the lower index.
MultiStartResult run_multi_start(const System &system, const PgamOptions &options);

/// Multi-start from caller supplied initial points, init(index) for index = 0 .. n_starts - 1.
MultiStartResult run_multi_start(const System &system, const PgamOptions &options,
                                 const std::function<StarConfig(int)> &init);

/// Best trace of run_multi_start.
PgamTrace multi_start(const System &system, const PgamOptions &options);

/// Round an energy-splitting solution to binary modes: |beta_t| >= |beta_r| selects transmission.
StarConfig round_to_ms(const StarConfig &es_config);

} // namespace starris

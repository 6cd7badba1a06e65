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

#include "starris/rate.hpp"

#include <vector>

namespace starris
{

/// Route used to evaluate the trace scalars behind the gradient.
enum class GradientPath
{
    eigenbasis, ///< O(M) eigenvalue sums (default)
    dense       ///< explicit M x M products, for verification
};

/// Intermediate quantities shared by all per-user gradient terms at one configuration.
///
/// nu(k) scales the signal derivative of user k, nu_bar(k) the derivative of its interference term
/// through its own covariance, and nu_tilde(k, i) the derivative of user k's interference term through
/// the covariance of user i. All three are real.
struct GradientWorkspace
{
    RegionPair<CVec> diag_a; ///< diag(R_RIS Phi_u R_RIS)
    std::vector<Region> regions;
    std::vector<EstimationStats> stats;
    RateReport report;
    RVec nu;
    RVec nu_bar;
    RMat nu_tilde;
};

struct NuScalars
{
    RVec nu;
    RVec nu_bar;
    RMat nu_tilde;
    double max_imag_residue = 0.0; ///< largest |Im| seen while forming the dense traces
};

/// Stacked gradient [d/dtheta_t*; d/dtheta_r*] and [d/dbeta_t; d/dbeta_r] of the sum SE.
struct GradientPair
{
    CVec d_theta;
    RVec d_beta;
};

struct BetaPartials
{
    RegionPair<RVec> signal;
    RegionPair<RVec> interference;
};

/// Thrown by grad_objective when some user's interference term vanishes.
class DegenerateInterferenceError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

NuScalars nu_scalars_eigenbasis(const std::vector<EstimationStats> &stats, const System &system);
NuScalars nu_scalars_dense(const StarConfig &config, const System &system);

GradientWorkspace make_workspace(const StarConfig &config, const System &system,
                                 GradientPath path = GradientPath::eigenbasis);

/// Conjugate-variable gradient of S_k with respect to theta_t and theta_r.
RegionPair<CVec> grad_signal_theta(int k, const GradientWorkspace &ws, const StarConfig &config);

/// Conjugate-variable gradient of the interference term of user k with respect to theta_t and theta_r.
RegionPair<CVec> grad_interference_theta(int k, const GradientWorkspace &ws, const StarConfig &config);

/// Real gradients of S_k and of the interference term of user k with respect to beta_t and beta_r.
BetaPartials grad_beta(int k, const GradientWorkspace &ws, const StarConfig &config);

/// Gradient of the sum SE (pre-log included) assembled with the quotient rule.
GradientPair grad_objective(const StarConfig &config, const System &system,
                            GradientPath path = GradientPath::eigenbasis);

/// Same as grad_objective but reusing a workspace built for `config`.
GradientPair grad_objective(const GradientWorkspace &ws, const StarConfig &config, const System &system);

} // namespace starris

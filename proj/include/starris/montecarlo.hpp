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

#include <cstdint>

namespace starris
{

/// Monte Carlo estimate of the use-and-forget SINR under MRT precoding with LMMSE estimates.
struct McEstimate
{
    RVec gamma_hat;
    double sum_se_hat = 0.0;
    int n_trials = 0;
    RVec std_err;               ///< delta-method standard error of gamma_hat
    double sum_se_std_err = 0.0;
    RVec s_hat;                 ///< |E{h_k^H hhat_k}|^2
    RVec i_hat;                 ///< interference-plus-noise term
    double lambda_hat = 0.0;    ///< precoder normalisation 1 / sum_i E{|hhat_i|^2}
};

/// Simulate channels, pilots and LMMSE estimation for n_trials independent coherence blocks and
/// assemble the SINR from the sample moments E{h_k^H hhat_k}, E{|h_k^H hhat_i|^2}, E{|hhat_i|^2}.
/// Trial t draws from a stream seeded by (seed, t); the result does not depend on `threads`.
McEstimate mc_sinr(const System &system, const StarConfig &config, int n_trials, std::uint64_t seed,
                   unsigned threads = 0);

/// Largest relative Frobenius error between the empirical covariance of h_k and alpha_k R_BS.
double mc_covariance_check(const System &system, const StarConfig &config, int n_trials, std::uint64_t seed,
                           unsigned threads = 0);

struct EstimationCheck
{
    double psi_rel_error = 0.0;     ///< |C_hat - Psi_k|_F / |Psi_k|_F, C_hat the sample covariance of hhat_k
    double cross_cov_norm = 0.0;    ///< |E{htilde_k hhat_k^H}|_F, sample estimate
    double cross_cov_std_err = 0.0; ///< sqrt of summed per-entry squared standard errors
};

/// Empirical check of the estimator statistics of user k.
EstimationCheck mc_estimation_check(const System &system, const StarConfig &config, int k, int n_trials,
                                    std::uint64_t seed, unsigned threads = 0);

} // namespace starris

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

#include "starris/correlation.hpp"

namespace starris
{

/// Uplink training parameters. Orthogonal pilots are never materialised: after de-spreading the
/// observation is r_k = h_k + n_k with n_k ~ CN(0, eps I), eps = sigma2 / (tau p).
struct PilotSpec
{
    int tau = 1;        ///< pilot length [channel uses]
    double power = 1.0; ///< per-symbol pilot power [W]
    double sigma2 = 1.0; ///< receiver noise power [W]

    double noise_variance() const { return sigma2 / (static_cast<double>(tau) * power); }
    /// Throws std::invalid_argument if tau < num_users or a power is not positive.
    void validate(int num_users) const;
};

/// LMMSE statistics of one user in the eigenbasis of R_BS.
struct EstimationStats
{
    double alpha = 0.0;
    RVec eigvals_q;   ///< eigenvalues of Q_k = (R_k + eps I)^-1
    RVec eigvals_psi; ///< eigenvalues of Psi_k = R_k Q_k R_k
    double trace_psi = 0.0;
};

/// Eigenvalues of Psi_k: (alpha s_i)^2 / (alpha s_i + eps). O(M).
EstimationStats lmmse_stats(double alpha, const RVec &bs_eigvals, double eps);
EstimationStats lmmse_stats(double alpha, const RVec &bs_eigvals, const PilotSpec &pilot);

/// tr(R_k - Psi_k), the estimation error power.
double error_covariance_trace(double alpha, const RVec &bs_eigvals, const EstimationStats &stats);

struct ChannelEstimate
{
    CVec h_hat;
    CVec r; ///< noisy de-spread observation
};

/// Draw pilot noise and form the LMMSE estimate R_k Q_k r in the eigenbasis of R_BS.
ChannelEstimate estimate_realization(const CVec &h, const PilotSpec &pilot, double alpha,
                                     const CorrelationPair &corr, Rng &rng);

} // namespace starris

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

#include "starris/estimation.hpp"

#include <cmath>

namespace starris
{

void PilotSpec::validate(int num_users) const
{
    if (tau < num_users)
        throw std::invalid_argument("PilotSpec: orthogonal pilots need tau >= K.");
    if (!(power > 0.0))
        throw std::invalid_argument("PilotSpec: pilot power must be positive.");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("PilotSpec: noise power must be positive.");
}

EstimationStats lmmse_stats(double alpha, const RVec &bs_eigvals, double eps)
{
    const Eigen::Index m = bs_eigvals.size();
    EstimationStats out{alpha, RVec(m), RVec(m), 0.0};
    for (Eigen::Index i = 0; i < m; ++i)
    {
        const double c = alpha * bs_eigvals(i);
        out.eigvals_q(i) = 1.0 / (c + eps);
        out.eigvals_psi(i) = c * c / (c + eps);
    }
    out.trace_psi = out.eigvals_psi.sum();
    return out;
}

EstimationStats lmmse_stats(double alpha, const RVec &bs_eigvals, const PilotSpec &pilot)
{
    return lmmse_stats(alpha, bs_eigvals, pilot.noise_variance());
}

double error_covariance_trace(double alpha, const RVec &bs_eigvals, const EstimationStats &stats)
{
    return (alpha * bs_eigvals - stats.eigvals_psi).sum();
}

ChannelEstimate estimate_realization(const CVec &h, const PilotSpec &pilot, double alpha,
                                     const CorrelationPair &corr, Rng &rng)
{
    const Eigen::Index m = h.size();
    if (m != corr.num_antennas())
        throw std::invalid_argument("estimate_realization: channel length does not match the array.");

    const double eps = pilot.noise_variance();
    ChannelEstimate out;
    out.r = h + std::sqrt(eps) * complex_normal_vector(m, rng);

    RVec weight(m);
    for (Eigen::Index i = 0; i < m; ++i)
    {
        const double c = alpha * corr.bs_eigvals(i);
        weight(i) = c / (c + eps);
    }
    const CVec rotated = corr.bs_eigvecs.adjoint() * out.r;
    out.h_hat = corr.bs_eigvecs * weight.cast<cdouble>().cwiseProduct(rotated);
    return out;
}

} // namespace starris

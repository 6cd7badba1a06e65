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

#include <vector>

namespace starris
{

/// Surface configuration: per-element amplitudes and unit-modulus phases for both regions.
///
/// Amplitudes are signed while an optimiser is running (a negative amplitude is equivalent to a
/// pi shift of the matching phase); `canonical()` folds the signs back into the phases.
struct StarConfig
{
    CVec theta_t;
    CVec theta_r;
    RVec beta_t;
    RVec beta_r;
    Protocol protocol = Protocol::energy_splitting;

    int size() const { return static_cast<int>(theta_t.size()); }

    CVec &theta(Region u) { return u == Region::transmission ? theta_t : theta_r; }
    const CVec &theta(Region u) const { return u == Region::transmission ? theta_t : theta_r; }
    RVec &beta(Region u) { return u == Region::transmission ? beta_t : beta_r; }
    const RVec &beta(Region u) const { return u == Region::transmission ? beta_t : beta_r; }

    /// Diagonal of the passive beamforming matrix of region u, beta_n theta_n.
    CVec pbm(Region u) const { return beta(u).cast<cdouble>().cwiseProduct(theta(u)); }

    /// Equal energy split sqrt(0.5) with the given phases.
    static StarConfig equal_split(CVec theta_t, CVec theta_r);

    /// Equal energy split with phases drawn uniformly on [0, 2 pi).
    static StarConfig random_phases(int n, Rng &rng);

    /// Equal split of energy, all phases zero.
    static StarConfig uniform(int n);

    /// Largest deviation from |theta| = 1 or beta_t^2 + beta_r^2 = 1 over all elements.
    double feasibility_error() const;

    /// Throws std::invalid_argument unless dimensions agree and the constraints hold within tol
    /// (and the amplitudes are binary for mode switching).
    void validate(double tol = 1e-10) const;

    /// Equivalent configuration with non-negative amplitudes.
    StarConfig canonical() const;
};

/// Per-user view of the large-scale statistics.
struct UserMeta
{
    Region mode = Region::reflection;
    double beta_bar = 0.0;
    double beta_hat = 0.0;
};

/// Covariance of the aggregated channel, R_k = alpha R_BS, kept in factored form.
struct AggregatedCovariance
{
    double alpha = 0.0;
    const CMat *r_bs_ref = nullptr;

    CMat matrix() const { return alpha * (*r_bs_ref); }
};

/// Everything the network knows about second-order channel statistics.
struct ChannelStatistics
{
    CorrelationPair corr;
    LinkGains gains;
    std::vector<Region> regions;
    CMat sqrt_bs;  ///< R_BS^{1/2}
    CMat sqrt_ris; ///< R_RIS^{1/2}

    static ChannelStatistics make(CorrelationPair corr, LinkGains gains, std::vector<Region> regions);

    int num_users() const { return static_cast<int>(regions.size()); }
    int num_antennas() const { return corr.num_antennas(); }
    int num_elements() const { return corr.num_elements(); }
    UserMeta user(int k) const;
    /// Indices of users in region u, increasing.
    std::vector<int> users_in(Region u) const;
};

/// diag(R_RIS Phi R_RIS) for Phi = diag(amplitudes .* phases); O(N^2).
CVec ris_diag_a(const CMat &r_ris, const RVec &amplitudes, const CVec &phases);

/// tr(R_RIS Phi R_RIS Phi^H) in O(N^2). Real and non-negative for Hermitian PSD R_RIS.
double phase_dependent_trace(const CMat &r_ris, const RVec &amplitudes, const CVec &phases);

/// Covariance scalar alpha = beta_bar + beta_hat tr(R_RIS Phi_w R_RIS Phi_w^H) of one user.
AggregatedCovariance aggregated_covariance(const UserMeta &user, const StarConfig &config,
                                           const CorrelationPair &corr);

/// alpha of every user.
RVec user_alphas(const StarConfig &config, const ChannelStatistics &stats);

/// One draw of all small-scale fading.
struct ChannelRealization
{
    CMat g;                 ///< base station - surface, M x N
    std::vector<CVec> q;    ///< surface - user k, length N
    std::vector<CVec> d;    ///< direct base station - user k, length M
    std::vector<CVec> h;    ///< aggregated d_k + G Phi_{w_k} q_k
};

/// Sample G = sqrt(beta_g) R_BS^{1/2} D R_RIS^{1/2}, q_k = sqrt(beta_tilde_k) R_RIS^{1/2} c_k,
/// d_k = sqrt(beta_bar_k) R_BS^{1/2} cbar_k and assemble h_k for every user.
ChannelRealization sample_realization(const ChannelStatistics &stats, const StarConfig &config, Rng &rng);

} // namespace starris

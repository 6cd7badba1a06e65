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

#include "starris/channel.hpp"

#include <cmath>
#include <numbers>

namespace starris
{

StarConfig StarConfig::equal_split(CVec theta_t, CVec theta_r)
{
    if (theta_t.size() != theta_r.size())
        throw std::invalid_argument("StarConfig: phase vectors differ in length.");
    const Eigen::Index n = theta_t.size();
    const double half = std::sqrt(0.5);
    return StarConfig{std::move(theta_t), std::move(theta_r), RVec::Constant(n, half), RVec::Constant(n, half),
                      Protocol::energy_splitting};
}

StarConfig StarConfig::random_phases(int n, Rng &rng)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    CVec t(n), r(n);
    for (int i = 0; i < n; ++i)
        t(i) = std::polar(1.0, angle(rng));
    for (int i = 0; i < n; ++i)
        r(i) = std::polar(1.0, angle(rng));
    return equal_split(std::move(t), std::move(r));
}

StarConfig StarConfig::uniform(int n)
{
    return equal_split(CVec::Ones(n), CVec::Ones(n));
}

double StarConfig::feasibility_error() const
{
    double err = 0.0;
    for (int i = 0; i < size(); ++i)
    {
        err = std::max(err, std::abs(std::abs(theta_t(i)) - 1.0));
        err = std::max(err, std::abs(std::abs(theta_r(i)) - 1.0));
        err = std::max(err, std::abs(beta_t(i) * beta_t(i) + beta_r(i) * beta_r(i) - 1.0));
    }
    return err;
}

void StarConfig::validate(double tol) const
{
    const Eigen::Index n = theta_t.size();
    if (theta_r.size() != n || beta_t.size() != n || beta_r.size() != n)
        throw std::invalid_argument("StarConfig: amplitude and phase vectors must share one length.");
    if (!(feasibility_error() <= tol))
        throw std::invalid_argument("StarConfig: unit-modulus or energy-conservation constraint violated.");
    if (protocol == Protocol::mode_switching)
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const bool binary_t = beta_t(i) == 0.0 || beta_t(i) == 1.0;
            const bool binary_r = beta_r(i) == 0.0 || beta_r(i) == 1.0;
            if (!binary_t || !binary_r)
                throw std::invalid_argument("StarConfig: mode switching requires binary amplitudes.");
        }
}

StarConfig StarConfig::canonical() const
{
    StarConfig out = *this;
    for (int i = 0; i < size(); ++i)
    {
        if (out.beta_t(i) < 0.0)
        {
            out.beta_t(i) = -out.beta_t(i);
            out.theta_t(i) = -out.theta_t(i);
        }
        if (out.beta_r(i) < 0.0)
        {
            out.beta_r(i) = -out.beta_r(i);
            out.theta_r(i) = -out.theta_r(i);
        }
    }
    return out;
}

ChannelStatistics ChannelStatistics::make(CorrelationPair corr, LinkGains gains, std::vector<Region> regions)
{
    if (static_cast<int>(regions.size()) != gains.num_users())
        throw std::invalid_argument("ChannelStatistics: one region tag per user is required.");
    CMat sqrt_bs = psd_sqrt(corr.r_bs);
    CMat sqrt_ris = psd_sqrt(corr.r_ris);
    return ChannelStatistics{std::move(corr), std::move(gains), std::move(regions), std::move(sqrt_bs),
                             std::move(sqrt_ris)};
}

UserMeta ChannelStatistics::user(int k) const
{
    return UserMeta{regions.at(k), gains.beta_bar(k), gains.beta_hat(k)};
}

std::vector<int> ChannelStatistics::users_in(Region u) const
{
    std::vector<int> out;
    for (int k = 0; k < num_users(); ++k)
        if (regions[k] == u)
            out.push_back(k);
    return out;
}

CVec ris_diag_a(const CMat &r_ris, const RVec &amplitudes, const CVec &phases)
{
    const Eigen::Index n = r_ris.rows();
    if (r_ris.cols() != n || amplitudes.size() != n || phases.size() != n)
        throw std::invalid_argument("ris_diag_a: dimension mismatch.");
    const CVec phi = amplitudes.cast<cdouble>().cwiseProduct(phases);
    // [R Phi R]_ii = sum_m R_im phi_m R_mi
    CVec out(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        cdouble acc = 0.0;
        for (Eigen::Index m = 0; m < n; ++m)
            acc += r_ris(i, m) * phi(m) * r_ris(m, i);
        out(i) = acc;
    }
    return out;
}

double phase_dependent_trace(const CMat &r_ris, const RVec &amplitudes, const CVec &phases)
{
    const CVec diag_a = ris_diag_a(r_ris, amplitudes, phases);
    const CVec phi = amplitudes.cast<cdouble>().cwiseProduct(phases);
    return diag_a.cwiseProduct(phi.conjugate()).sum().real();
}

AggregatedCovariance aggregated_covariance(const UserMeta &user, const StarConfig &config,
                                           const CorrelationPair &corr)
{
    const double trace = phase_dependent_trace(corr.r_ris, config.beta(user.mode), config.theta(user.mode));
    return AggregatedCovariance{user.beta_bar + user.beta_hat * trace, &corr.r_bs};
}

RVec user_alphas(const StarConfig &config, const ChannelStatistics &stats)
{
    const double trace_t = phase_dependent_trace(stats.corr.r_ris, config.beta_t, config.theta_t);
    const double trace_r = phase_dependent_trace(stats.corr.r_ris, config.beta_r, config.theta_r);
    RVec alpha(stats.num_users());
    for (int k = 0; k < stats.num_users(); ++k)
    {
        const double trace = stats.regions[k] == Region::transmission ? trace_t : trace_r;
        alpha(k) = stats.gains.beta_bar(k) + stats.gains.beta_hat(k) * trace;
    }
    return alpha;
}

ChannelRealization sample_realization(const ChannelStatistics &stats, const StarConfig &config, Rng &rng)
{
    const int m = stats.num_antennas();
    const int n = stats.num_elements();
    const int k_users = stats.num_users();
    if (config.size() != n)
        throw std::invalid_argument("sample_realization: configuration size does not match the surface.");

    CMat fading(m, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i)
            fading(i, j) = complex_normal(rng);

    ChannelRealization out;
    out.g = std::sqrt(stats.gains.beta_g) * stats.sqrt_bs * fading * stats.sqrt_ris;
    out.q.reserve(k_users);
    out.d.reserve(k_users);
    out.h.reserve(k_users);

    const CVec pbm_t = config.pbm(Region::transmission);
    const CVec pbm_r = config.pbm(Region::reflection);
    for (int k = 0; k < k_users; ++k)
    {
        out.q.push_back(std::sqrt(stats.gains.beta_tilde(k)) * (stats.sqrt_ris * complex_normal_vector(n, rng)));
        out.d.push_back(std::sqrt(stats.gains.beta_bar(k)) * (stats.sqrt_bs * complex_normal_vector(m, rng)));
        const CVec &pbm = stats.regions[k] == Region::transmission ? pbm_t : pbm_r;
        out.h.push_back(out.d[k] + out.g * pbm.cwiseProduct(out.q[k]));
    }
    return out;
}

} // namespace starris

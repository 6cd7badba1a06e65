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

#include "starris/rate.hpp"

#include <cmath>

namespace starris
{

double signal_term(const EstimationStats &stats_k)
{
    return stats_k.trace_psi * stats_k.trace_psi;
}

double interference_term(int k, std::span<const EstimationStats> all_stats, const RVec &bs_eigvals, double rho,
                         double sigma2)
{
    const auto num_users = static_cast<double>(all_stats.size());
    const EstimationStats &own = all_stats[static_cast<std::size_t>(k)];

    double cross = 0.0;
    double total_trace = 0.0;
    for (const auto &other : all_stats)
    {
        cross += bs_eigvals.dot(other.eigvals_psi);
        total_trace += other.trace_psi;
    }
    return own.alpha * cross - own.eigvals_psi.squaredNorm() + (num_users * sigma2 / rho) * total_trace;
}

std::vector<EstimationStats> user_estimation_stats(const StarConfig &config, const System &system)
{
    const RVec alpha = user_alphas(config, system.stats);
    const double eps = system.pilot.noise_variance();
    std::vector<EstimationStats> out;
    out.reserve(static_cast<std::size_t>(alpha.size()));
    for (Eigen::Index k = 0; k < alpha.size(); ++k)
        out.push_back(lmmse_stats(alpha(k), system.stats.corr.bs_eigvals, eps));
    return out;
}

RateReport assemble_report(RVec s, RVec i_tilde, double prelog)
{
    const Eigen::Index num_users = s.size();
    RateReport out{std::move(s), std::move(i_tilde), RVec(num_users), 0.0, prelog};
    double sum = 0.0;
    for (Eigen::Index k = 0; k < num_users; ++k)
    {
        if (out.s(k) == 0.0 && out.i_tilde(k) == 0.0)
            out.gamma(k) = 0.0;
        else if (!(out.i_tilde(k) > 0.0))
            throw NumericalError("assemble_report: non-positive interference term for user " + std::to_string(k) + ".");
        else
            out.gamma(k) = out.s(k) / out.i_tilde(k);
        sum += std::log2(1.0 + out.gamma(k));
    }
    out.sum_se = prelog * sum;
    return out;
}

RateReport sum_se(const StarConfig &config, const System &system)
{
    const auto stats = user_estimation_stats(config, system);
    const int num_users = system.num_users();
    RVec s(num_users), i_tilde(num_users);
    for (int k = 0; k < num_users; ++k)
    {
        s(k) = signal_term(stats[k]);
        i_tilde(k) = interference_term(k, stats, system.stats.corr.bs_eigvals, system.rho, system.noise_power());
    }
    return assemble_report(std::move(s), std::move(i_tilde), system.prelog());
}

cdouble dense_surface_trace(const CMat &r_ris, const CVec &pbm)
{
    const CMat phi = pbm.asDiagonal();
    return (r_ris * phi * r_ris * phi.adjoint()).trace();
}

RateReport sum_se_dense(const StarConfig &config, const System &system)
{
    const auto &stats = system.stats;
    const int num_users = system.num_users();
    const int m = system.num_antennas();
    const double eps = system.pilot.noise_variance();
    const CMat identity = CMat::Identity(m, m);

    std::vector<CMat> r(num_users), psi(num_users);
    for (int k = 0; k < num_users; ++k)
    {
        const Region u = stats.regions[k];
        const cdouble trace = dense_surface_trace(stats.corr.r_ris, config.pbm(u));
        r[k] = (stats.gains.beta_bar(k) + stats.gains.beta_hat(k) * trace) * stats.corr.r_bs;
        const CMat q = (r[k] + eps * identity).inverse();
        psi[k] = r[k] * q * r[k];
    }

    CMat psi_total = CMat::Zero(m, m);
    for (const auto &p : psi)
        psi_total += p;

    const double noise_scale = num_users * system.noise_power() / system.rho;
    RVec s(num_users), i_tilde(num_users);
    for (int k = 0; k < num_users; ++k)
    {
        s(k) = std::norm(psi[k].trace());
        i_tilde(k) = ((r[k] * psi_total).trace() - (psi[k] * psi[k]).trace() + noise_scale * psi_total.trace()).real();
    }
    return assemble_report(std::move(s), std::move(i_tilde), system.prelog());
}

} // namespace starris

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

#include "starris/gradients.hpp"

#include <cmath>
#include <numbers>

namespace starris
{

namespace
{

// Eigenvalues of Q R + R Q - Q R^2 Q, the derivative of tr(Psi) along R_BS.
RVec psi_derivative_weights(const EstimationStats &st, const RVec &bs_eigvals)
{
    const Eigen::Index m = bs_eigvals.size();
    RVec w(m);
    for (Eigen::Index i = 0; i < m; ++i)
    {
        const double c = st.alpha * bs_eigvals(i);
        const double q = st.eigvals_q(i);
        w(i) = 2.0 * c * q - c * c * q * q;
    }
    return w;
}

double scalar_for_region(int k, Region u, const GradientWorkspace &ws)
{
    double acc = ws.regions[static_cast<std::size_t>(k)] == u ? ws.nu_bar(k) : 0.0;
    for (int i = 0; i < static_cast<int>(ws.regions.size()); ++i)
        if (ws.regions[static_cast<std::size_t>(i)] == u)
            acc += ws.nu_tilde(k, i);
    return acc;
}

// 2 Re{conj(diag A_u) .* theta_u}, the derivative of the surface trace along beta_u.
RVec beta_direction(const CVec &diag_a, const CVec &theta)
{
    return 2.0 * diag_a.conjugate().cwiseProduct(theta).real();
}

} // namespace

NuScalars nu_scalars_eigenbasis(const std::vector<EstimationStats> &stats, const System &system)
{
    const int num_users = system.num_users();
    const RVec &sigma = system.stats.corr.bs_eigvals;
    const RVec &beta_hat = system.stats.gains.beta_hat;
    const double noise_scale = num_users * system.noise_power() / system.rho;

    RVec psi_total = RVec::Zero(sigma.size());
    std::vector<RVec> weights;
    weights.reserve(static_cast<std::size_t>(num_users));
    for (const auto &st : stats)
    {
        psi_total += st.eigvals_psi;
        weights.push_back(psi_derivative_weights(st, sigma));
    }

    NuScalars out{RVec(num_users), RVec(num_users), RMat(num_users, num_users), 0.0};
    for (int k = 0; k < num_users; ++k)
    {
        const auto &st = stats[k];
        out.nu(k) = 2.0 * beta_hat(k) * st.trace_psi * sigma.dot(weights[k]);
        out.nu_bar(k) = beta_hat(k) *
                        sigma.dot(psi_total - 2.0 * st.eigvals_psi.cwiseProduct(weights[k]));
        const RVec r_bar = st.alpha * sigma.array() + noise_scale;
        for (int i = 0; i < num_users; ++i)
            out.nu_tilde(k, i) = beta_hat(i) * sigma.dot(r_bar.cwiseProduct(weights[i]));
    }
    return out;
}

NuScalars nu_scalars_dense(const StarConfig &config, const System &system)
{
    const auto &st = system.stats;
    const int num_users = system.num_users();
    const int m = system.num_antennas();
    const double eps = system.pilot.noise_variance();
    const double noise_scale = num_users * system.noise_power() / system.rho;
    const CMat identity = CMat::Identity(m, m);
    const CMat &r_bs = st.corr.r_bs;

    std::vector<CMat> r(num_users), q(num_users), psi(num_users);
    CMat psi_total = CMat::Zero(m, m);
    for (int k = 0; k < num_users; ++k)
    {
        const cdouble trace = dense_surface_trace(st.corr.r_ris, config.pbm(st.regions[k]));
        r[k] = (st.gains.beta_bar(k) + st.gains.beta_hat(k) * trace) * r_bs;
        q[k] = (r[k] + eps * identity).inverse();
        psi[k] = r[k] * q[k] * r[k];
        psi_total += psi[k];
    }

    NuScalars out{RVec(num_users), RVec(num_users), RMat(num_users, num_users), 0.0};
    auto take_real = [&out](cdouble v) {
        out.max_imag_residue = std::max(out.max_imag_residue, std::abs(v.imag()));
        return v.real();
    };

    for (int k = 0; k < num_users; ++k)
    {
        const double beta_hat = st.gains.beta_hat(k);
        const CMat qr = q[k] * r[k];
        const CMat rq = r[k] * q[k];
        const CMat d_trace = qr + rq - q[k] * r[k] * r[k] * q[k];
        out.nu(k) = 2.0 * beta_hat * take_real(psi[k].trace()) * take_real((d_trace * r_bs).trace());

        const CMat psi_check = psi_total - 2.0 * (qr * psi[k] + psi[k] * rq - qr * psi[k] * rq);
        out.nu_bar(k) = beta_hat * take_real((psi_check * r_bs).trace());

        const CMat r_bar = r[k] + noise_scale * identity;
        for (int i = 0; i < num_users; ++i)
        {
            const CMat qr_i = q[i] * r[i];
            const CMat rq_i = r[i] * q[i];
            const CMat r_tilde = qr_i * r_bar - qr_i * r_bar * rq_i + r_bar * rq_i;
            out.nu_tilde(k, i) = st.gains.beta_hat(i) * take_real((r_tilde * r_bs).trace());
        }
    }
    return out;
}

GradientWorkspace make_workspace(const StarConfig &config, const System &system, GradientPath path)
{
    const auto &st = system.stats;
    GradientWorkspace ws;
    ws.regions = st.regions;
    ws.stats = user_estimation_stats(config, system);

    NuScalars nu;
    if (path == GradientPath::eigenbasis)
    {
        ws.diag_a.t = ris_diag_a(st.corr.r_ris, config.beta_t, config.theta_t);
        ws.diag_a.r = ris_diag_a(st.corr.r_ris, config.beta_r, config.theta_r);
        ws.report = sum_se(config, system);
        nu = nu_scalars_eigenbasis(ws.stats, system);
    }
    else
    {
        for (Region u : {Region::transmission, Region::reflection})
        {
            const CMat phi = config.pbm(u).asDiagonal();
            ws.diag_a[u] = (st.corr.r_ris * phi * st.corr.r_ris).diagonal();
        }
        ws.report = sum_se_dense(config, system);
        nu = nu_scalars_dense(config, system);
    }
    ws.nu = std::move(nu.nu);
    ws.nu_bar = std::move(nu.nu_bar);
    ws.nu_tilde = std::move(nu.nu_tilde);
    return ws;
}

RegionPair<CVec> grad_signal_theta(int k, const GradientWorkspace &ws, const StarConfig &config)
{
    const int n = config.size();
    RegionPair<CVec> out{CVec::Zero(n), CVec::Zero(n)};
    const Region own = ws.regions.at(static_cast<std::size_t>(k));
    out[own] = ws.nu(k) * ws.diag_a[own].cwiseProduct(config.beta(own).cast<cdouble>());
    return out;
}

RegionPair<CVec> grad_interference_theta(int k, const GradientWorkspace &ws, const StarConfig &config)
{
    RegionPair<CVec> out;
    for (Region u : {Region::transmission, Region::reflection})
        out[u] = scalar_for_region(k, u, ws) * ws.diag_a[u].cwiseProduct(config.beta(u).cast<cdouble>());
    return out;
}

BetaPartials grad_beta(int k, const GradientWorkspace &ws, const StarConfig &config)
{
    const int n = config.size();
    BetaPartials out{{RVec::Zero(n), RVec::Zero(n)}, {RVec(n), RVec(n)}};
    const Region own = ws.regions.at(static_cast<std::size_t>(k));
    for (Region u : {Region::transmission, Region::reflection})
    {
        const RVec direction = beta_direction(ws.diag_a[u], config.theta(u));
        if (u == own)
            out.signal[u] = ws.nu(k) * direction;
        out.interference[u] = scalar_for_region(k, u, ws) * direction;
    }
    return out;
}

GradientPair grad_objective(const GradientWorkspace &ws, const StarConfig &config, const System &system)
{
    const int n = config.size();
    const double scale = system.prelog() / std::numbers::ln2;
    GradientPair out{CVec::Zero(2 * n), RVec::Zero(2 * n)};

    const auto &rep = ws.report;
    for (int k = 0; k < system.num_users(); ++k)
    {
        const double interference = rep.i_tilde(k);
        if (!(interference > 0.0))
            throw DegenerateInterferenceError("grad_objective: interference term of user " + std::to_string(k) +
                                              " is not positive.");
        const double denom = (1.0 + rep.gamma(k)) * interference * interference;
        const double w_signal = scale * interference / denom;
        const double w_interf = -scale * rep.s(k) / denom;

        const auto gs = grad_signal_theta(k, ws, config);
        const auto gi = grad_interference_theta(k, ws, config);
        const auto gb = grad_beta(k, ws, config);

        out.d_theta.head(n) += w_signal * gs.t + w_interf * gi.t;
        out.d_theta.tail(n) += w_signal * gs.r + w_interf * gi.r;
        out.d_beta.head(n) += w_signal * gb.signal.t + w_interf * gb.interference.t;
        out.d_beta.tail(n) += w_signal * gb.signal.r + w_interf * gb.interference.r;
    }
    return out;
}

GradientPair grad_objective(const StarConfig &config, const System &system, GradientPath path)
{
    return grad_objective(make_workspace(config, system, path), config, system);
}

} // namespace starris

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

#include "starris/montecarlo.hpp"
#include "starris/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <numbers>

namespace starris
{

namespace
{

constexpr int block_size = 256;

struct TrialMoments
{
    CVec own;   ///< h_k^H hhat_k
    RMat cross; ///< |h_k^H hhat_i|^2
    RVec energy; ///< |hhat_i|^2
};

std::vector<CVec> estimate_all(const ChannelRealization &channel, const System &system, const RVec &alpha,
                               Rng &rng)
{
    std::vector<CVec> h_hat;
    h_hat.reserve(channel.h.size());
    for (std::size_t k = 0; k < channel.h.size(); ++k)
        h_hat.push_back(estimate_realization(channel.h[k], system.pilot, alpha(static_cast<Eigen::Index>(k)),
                                             system.stats.corr, rng)
                            .h_hat);
    return h_hat;
}

void require_trials(int n_trials)
{
    if (n_trials < 2)
        throw std::invalid_argument("Monte Carlo routines need at least two trials.");
}

} // namespace

McEstimate mc_sinr(const System &system, const StarConfig &config, int n_trials, std::uint64_t seed,
                   unsigned threads)
{
    require_trials(n_trials);
    system.validate();
    const int num_users = system.num_users();
    const RVec alpha = user_alphas(config, system.stats);

    std::vector<TrialMoments> trials(static_cast<std::size_t>(n_trials));
    parallel_for(trials.size(), threads, [&](std::size_t t) {
        Rng rng(derive_seed(seed, t));
        const auto channel = sample_realization(system.stats, config, rng);
        const auto h_hat = estimate_all(channel, system, alpha, rng);

        TrialMoments &out = trials[t];
        out.own.resize(num_users);
        out.cross.resize(num_users, num_users);
        out.energy.resize(num_users);
        for (int k = 0; k < num_users; ++k)
        {
            out.energy(k) = h_hat[k].squaredNorm();
            for (int i = 0; i < num_users; ++i)
            {
                const cdouble v = channel.h[k].dot(h_hat[i]);
                out.cross(k, i) = std::norm(v);
                if (i == k)
                    out.own(k) = v;
            }
        }
        if (!out.own.allFinite() || !out.cross.allFinite() || !out.energy.allFinite())
            throw NumericalError("mc_sinr: non-finite moments in trial " + std::to_string(t) + ".");
    });

    const double n = n_trials;
    CVec mean_own = CVec::Zero(num_users);
    RMat mean_cross = RMat::Zero(num_users, num_users);
    double mean_energy = 0.0;
    for (const auto &tr : trials)
    {
        mean_own += tr.own;
        mean_cross += tr.cross;
        mean_energy += tr.energy.sum();
    }
    mean_own /= n;
    mean_cross /= n;
    mean_energy /= n;

    const double noise_scale = num_users * system.noise_power() / system.rho;
    McEstimate est;
    est.n_trials = n_trials;
    est.lambda_hat = 1.0 / mean_energy;
    est.s_hat.resize(num_users);
    est.i_hat.resize(num_users);
    est.gamma_hat.resize(num_users);
    est.std_err.resize(num_users);

    // delta method: gamma_k = S_k / I_k as a smooth function of the sample means
    RMat influence(n_trials, num_users);
    double se_sum = 0.0;
    for (int k = 0; k < num_users; ++k)
    {
        const cdouble a = mean_own(k);
        double spread = 0.0;
        for (const auto &tr : trials)
            spread += std::norm(tr.own(k) - a);
        const double var_own = spread / (n - 1.0);
        // |mean a|^2 overestimates |E a|^2 by Var(a) / n, which matters for weak users
        const double s = std::max(0.0, std::norm(a) - var_own / n);
        const double i_term = mean_cross.row(k).sum() - mean_cross(k, k) + var_own + noise_scale * mean_energy;
        est.s_hat(k) = s;
        est.i_hat(k) = i_term;
        est.gamma_hat(k) = s / i_term;
        se_sum += std::log2(1.0 + est.gamma_hat(k));

        const double ds_re = 2.0 * a.real();
        const double ds_im = 2.0 * a.imag();
        const double inv_i2 = 1.0 / (i_term * i_term);
        const double g_re = (ds_re * i_term + s * ds_re) * inv_i2;
        const double g_im = (ds_im * i_term + s * ds_im) * inv_i2;
        const double g_cross = -s * inv_i2;
        const double g_energy = -s * noise_scale * inv_i2;
        for (int t = 0; t < n_trials; ++t)
        {
            const auto &tr = trials[static_cast<std::size_t>(t)];
            influence(t, k) = g_re * (tr.own(k).real() - a.real()) + g_im * (tr.own(k).imag() - a.imag()) +
                              g_cross * (tr.cross.row(k).sum() - mean_cross.row(k).sum()) +
                              g_energy * (tr.energy.sum() - mean_energy);
        }
        est.std_err(k) = std::sqrt(influence.col(k).squaredNorm() / (n - 1.0) / n);
    }
    est.sum_se_hat = system.prelog() * se_sum;

    RVec weight(num_users);
    for (int k = 0; k < num_users; ++k)
        weight(k) = system.prelog() / ((1.0 + est.gamma_hat(k)) * std::numbers::ln2);
    est.sum_se_std_err = std::sqrt((influence * weight).squaredNorm() / (n - 1.0) / n);

    if (!est.gamma_hat.allFinite() || !std::isfinite(est.sum_se_hat))
        throw NumericalError("mc_sinr: non-finite SINR estimate.");
    return est;
}

double mc_covariance_check(const System &system, const StarConfig &config, int n_trials, std::uint64_t seed,
                           unsigned threads)
{
    require_trials(n_trials);
    const int num_users = system.num_users();
    const int m = system.num_antennas();
    const std::size_t blocks = (static_cast<std::size_t>(n_trials) + block_size - 1) / block_size;

    std::vector<std::vector<CMat>> partial(blocks);
    parallel_for(blocks, threads, [&](std::size_t b) {
        std::vector<CMat> acc(static_cast<std::size_t>(num_users), CMat::Zero(m, m));
        const std::size_t end = std::min<std::size_t>((b + 1) * block_size, static_cast<std::size_t>(n_trials));
        for (std::size_t t = b * block_size; t < end; ++t)
        {
            Rng rng(derive_seed(seed, t));
            const auto channel = sample_realization(system.stats, config, rng);
            for (int k = 0; k < num_users; ++k)
                acc[k] += channel.h[k] * channel.h[k].adjoint();
        }
        partial[b] = std::move(acc);
    });

    const RVec alpha = user_alphas(config, system.stats);
    double worst = 0.0;
    for (int k = 0; k < num_users; ++k)
    {
        CMat empirical = CMat::Zero(m, m);
        for (const auto &blk : partial)
            empirical += blk[k];
        empirical /= static_cast<double>(n_trials);
        const CMat analytic = alpha(k) * system.stats.corr.r_bs;
        const double diff = (empirical - analytic).norm();
        const double ref = analytic.norm();
        if (ref == 0.0)
            worst = std::max(worst, diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        else
            worst = std::max(worst, diff / ref);
    }
    return worst;
}

EstimationCheck mc_estimation_check(const System &system, const StarConfig &config, int k, int n_trials,
                                    std::uint64_t seed, unsigned threads)
{
    require_trials(n_trials);
    if (k < 0 || k >= system.num_users())
        throw std::invalid_argument("mc_estimation_check: user index out of range.");
    const int m = system.num_antennas();
    const RVec alpha = user_alphas(config, system.stats);
    const std::size_t blocks = (static_cast<std::size_t>(n_trials) + block_size - 1) / block_size;

    struct Sums
    {
        CMat est_cov;  // sum hhat hhat^H
        CMat cross;    // sum htilde hhat^H
        RMat cross_re2; // sum Re(.)^2 entrywise
        RMat cross_im2;
    };
    std::vector<Sums> partial(blocks);
    parallel_for(blocks, threads, [&](std::size_t b) {
        Sums acc{CMat::Zero(m, m), CMat::Zero(m, m), RMat::Zero(m, m), RMat::Zero(m, m)};
        const std::size_t end = std::min<std::size_t>((b + 1) * block_size, static_cast<std::size_t>(n_trials));
        for (std::size_t t = b * block_size; t < end; ++t)
        {
            Rng rng(derive_seed(seed, t));
            const auto channel = sample_realization(system.stats, config, rng);
            const auto h_hat = estimate_all(channel, system, alpha, rng);
            const CVec &hk = h_hat[k];
            const CVec err = channel.h[k] - hk;
            const CMat cross = err * hk.adjoint();
            acc.est_cov += hk * hk.adjoint();
            acc.cross += cross;
            acc.cross_re2 += cross.real().cwiseAbs2();
            acc.cross_im2 += cross.imag().cwiseAbs2();
        }
        partial[b] = std::move(acc);
    });

    Sums total{CMat::Zero(m, m), CMat::Zero(m, m), RMat::Zero(m, m), RMat::Zero(m, m)};
    for (const auto &p : partial)
    {
        total.est_cov += p.est_cov;
        total.cross += p.cross;
        total.cross_re2 += p.cross_re2;
        total.cross_im2 += p.cross_im2;
    }
    const double n = n_trials;
    const CMat est_cov = total.est_cov / n;
    const CMat cross_mean = total.cross / n;

    const auto st = lmmse_stats(alpha(k), system.stats.corr.bs_eigvals, system.pilot);
    const auto &u = system.stats.corr.bs_eigvecs;
    const CMat psi = u * st.eigvals_psi.cast<cdouble>().asDiagonal() * u.adjoint();

    EstimationCheck out;
    out.psi_rel_error = (est_cov - psi).norm() / psi.norm();
    out.cross_cov_norm = cross_mean.norm();
    // per-entry variance of the sample mean, real and imaginary parts separately
    const RMat var_re = (total.cross_re2 / n - cross_mean.real().cwiseAbs2()) / (n - 1.0);
    const RMat var_im = (total.cross_im2 / n - cross_mean.imag().cwiseAbs2()) / (n - 1.0);
    out.cross_cov_std_err = std::sqrt(var_re.cwiseMax(0.0).sum() + var_im.cwiseMax(0.0).sum());
    return out;
}

} // namespace starris

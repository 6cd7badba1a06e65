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

#include "starris/system.hpp"

#include <span>
#include <vector>

namespace starris
{

/// Closed-form downlink SINR terms and sum spectral efficiency under MRT precoding.
struct RateReport
{
    RVec s;       ///< signal terms S_k = tr^2(Psi_k)
    RVec i_tilde; ///< interference-plus-noise terms
    RVec gamma;   ///< SINR S_k / I_k (0 when both vanish)
    double sum_se = 0.0; ///< [bit/s/Hz]
    double prelog = 1.0;
};

double signal_term(const EstimationStats &stats_k);

/// sum_i tr(R_k Psi_i) - tr(Psi_k^2) + (K sigma2 / rho) sum_i tr(Psi_i), from eigenvalues only.
double interference_term(int k, std::span<const EstimationStats> all_stats, const RVec &bs_eigvals, double rho,
                         double sigma2);

/// LMMSE statistics of every user for the given configuration.
std::vector<EstimationStats> user_estimation_stats(const StarConfig &config, const System &system);

/// Build gamma and the sum SE from the per-user terms.
RateReport assemble_report(RVec s, RVec i_tilde, double prelog);

/// Sum SE on the eigenbasis fast path, O(K (N^2 + M)) once R_BS is diagonalised.
RateReport sum_se(const StarConfig &config, const System &system);

/// Reference evaluation with explicit M x M matrices, a matrix inverse per user and an O(N^3)
/// surface trace. Used to cross-check the fast path.
RateReport sum_se_dense(const StarConfig &config, const System &system);

/// Dense tr(R_RIS Phi R_RIS Phi^H) with the full N x N products.
cdouble dense_surface_trace(const CMat &r_ris, const CVec &pbm);

} // namespace starris

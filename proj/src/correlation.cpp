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

#include "starris/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace starris
{

void ArrayGeometry::validate() const
{
    if (n_h < 1 || n_v < 1)
        throw std::invalid_argument("ArrayGeometry: element counts must be at least 1.");
    if (!(spacing_h > 0.0) || !(spacing_v > 0.0))
        throw std::invalid_argument("ArrayGeometry: element spacings must be strictly positive.");
}

BsCorrelationModel parse_bs_correlation_model(const std::string &name)
{
    if (name == "exponential")
        return BsCorrelationModel::exponential;
    if (name == "uncorrelated" || name == "identity")
        return BsCorrelationModel::uncorrelated;
    throw std::invalid_argument("Unknown base-station correlation model '" + name + "'.");
}

double sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

CMat build_ris_correlation(const ArrayGeometry &geom)
{
    geom.validate();
    const int n = geom.size();
    CMat r(n, n);
    for (int a = 0; a < n; ++a)
    {
        r(a, a) = 1.0;
        const double xa = (a % geom.n_h) * geom.spacing_h;
        const double ya = (a / geom.n_h) * geom.spacing_v;
        for (int b = a + 1; b < n; ++b)
        {
            const double dx = xa - (b % geom.n_h) * geom.spacing_h;
            const double dy = ya - (b / geom.n_h) * geom.spacing_v;
            const double v = sinc(2.0 * std::hypot(dx, dy));
            r(a, b) = v;
            r(b, a) = v;
        }
    }
    return r;
}

CMat build_bs_correlation(int num_antennas, BsCorrelationModel model, double param)
{
    if (num_antennas < 1)
        throw std::invalid_argument("build_bs_correlation: antenna count must be at least 1.");

    switch (model)
    {
    case BsCorrelationModel::uncorrelated:
        return CMat::Identity(num_antennas, num_antennas);
    case BsCorrelationModel::exponential:
    {
        if (!(param >= 0.0 && param < 1.0))
            throw std::invalid_argument("build_bs_correlation: exponential parameter must lie in [0, 1).");
        CMat r(num_antennas, num_antennas);
        for (int i = 0; i < num_antennas; ++i)
            for (int j = 0; j < num_antennas; ++j)
                r(i, j) = std::pow(param, std::abs(i - j));
        return r;
    }
    }
    throw std::invalid_argument("build_bs_correlation: unknown model.");
}

double path_gain(double distance, double exponent, double element_area, double penetration_db)
{
    if (!(distance > 0.0))
        throw std::invalid_argument("path_gain: distance must be strictly positive.");
    if (!(element_area > 0.0))
        throw std::invalid_argument("path_gain: element area must be strictly positive.");
    return element_area * std::pow(distance, -exponent) * std::pow(10.0, -penetration_db / 10.0);
}

HermitianEigen eigendecompose_bs(const CMat &r_bs)
{
    if (r_bs.rows() != r_bs.cols())
        throw std::invalid_argument("eigendecompose_bs: matrix must be square.");

    Eigen::SelfAdjointEigenSolver<CMat> solver(r_bs);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecompose_bs: Hermitian eigensolver did not converge.");

    // Eigen returns ascending order
    const Eigen::Index m = r_bs.rows();
    HermitianEigen out{CMat(m, m), RVec(m)};
    for (Eigen::Index i = 0; i < m; ++i)
    {
        out.values(i) = solver.eigenvalues()(m - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(m - 1 - i);
    }
    return out;
}

CMat psd_sqrt(const CMat &r)
{
    Eigen::SelfAdjointEigenSolver<CMat> solver(r);
    if (solver.info() != Eigen::Success)
        throw NumericalError("psd_sqrt: Hermitian eigensolver did not converge.");
    const RVec root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().adjoint();
}

CorrelationPair CorrelationPair::make(CMat r_bs, CMat r_ris)
{
    if (r_bs.rows() != r_bs.cols() || r_ris.rows() != r_ris.cols())
        throw std::invalid_argument("CorrelationPair: correlation matrices must be square.");
    auto evd = eigendecompose_bs(r_bs);
    evd.values = evd.values.cwiseMax(0.0);
    return CorrelationPair{std::move(r_bs), std::move(r_ris), std::move(evd.vectors), std::move(evd.values)};
}

LinkGains LinkGains::make(double beta_g, RVec beta_bar, RVec beta_tilde)
{
    if (beta_bar.size() != beta_tilde.size())
        throw std::invalid_argument("LinkGains: direct and surface gain vectors differ in length.");
    if (beta_g < 0.0 || (beta_bar.array() < 0.0).any() || (beta_tilde.array() < 0.0).any())
        throw std::invalid_argument("LinkGains: gains must be non-negative.");
    RVec beta_hat = beta_g * beta_tilde;
    return LinkGains{beta_g, std::move(beta_bar), std::move(beta_tilde), std::move(beta_hat)};
}

} // namespace starris

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

#include "starris/types.hpp"

namespace starris
{

/// Uniform planar array of surface elements. Element spacings are in wavelengths.
struct ArrayGeometry
{
    int n_h = 1;            ///< elements along the horizontal axis
    int n_v = 1;            ///< elements along the vertical axis
    double spacing_h = 0.25; ///< horizontal element spacing [wavelengths]
    double spacing_v = 0.25; ///< vertical element spacing [wavelengths]

    int size() const { return n_h * n_v; }
    void validate() const;
};

enum class BsCorrelationModel
{
    uncorrelated, ///< identity matrix
    exponential   ///< Toeplitz, entry (i,j) = param^|i-j|
};

BsCorrelationModel parse_bs_correlation_model(const std::string &name);

/// Normalised sinc, sin(pi x) / (pi x), continuous at zero.
double sinc(double x);

/// Surface correlation matrix: entry (n,m) = sinc(2 |u_n - u_m|), with u the element positions
/// in wavelengths. Element n sits at grid column n % n_h and row n / n_h.
CMat build_ris_correlation(const ArrayGeometry &geom);

/// Base-station array correlation matrix. Throws std::invalid_argument if the exponential model
/// parameter lies outside [0, 1).
CMat build_bs_correlation(int num_antennas, BsCorrelationModel model, double param);

/// Linear power gain A d^-alpha 10^(-penetration_db / 10).
double path_gain(double distance, double exponent, double element_area, double penetration_db = 0.0);

struct HermitianEigen
{
    CMat vectors; ///< unitary, columns ordered like `values`
    RVec values;  ///< descending
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted in descending order.
HermitianEigen eigendecompose_bs(const CMat &r_bs);

/// Principal square root of a Hermitian PSD matrix, with roundoff-negative eigenvalues clamped at zero.
CMat psd_sqrt(const CMat &r);

/// The two correlation matrices with the base-station eigendecomposition cached.
struct CorrelationPair
{
    CMat r_bs;
    CMat r_ris;
    CMat bs_eigvecs;
    RVec bs_eigvals;

    static CorrelationPair make(CMat r_bs, CMat r_ris);

    int num_antennas() const { return static_cast<int>(r_bs.rows()); }
    int num_elements() const { return static_cast<int>(r_ris.rows()); }
};

/// Large-scale gains of every link.
struct LinkGains
{
    double beta_g = 0.0; ///< surface - base station
    RVec beta_bar;       ///< direct base station - user k (penetration loss included)
    RVec beta_tilde;     ///< surface - user k
    RVec beta_hat;       ///< cascaded gain beta_g * beta_tilde[k]

    static LinkGains make(double beta_g, RVec beta_bar, RVec beta_tilde);

    int num_users() const { return static_cast<int>(beta_bar.size()); }
};

} // namespace starris

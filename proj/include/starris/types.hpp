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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace starris
{

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Pseudo-random engine used for every stochastic routine in the library.
using Rng = std::mt19937_64;

/// Side of the surface a user sits on: behind it (transmission) or facing it (reflection).
enum class Region
{
    transmission,
    reflection
};

/// Surface operation protocol: energy splitting (continuous amplitudes) or mode switching (binary).
enum class Protocol
{
    energy_splitting,
    mode_switching
};

std::string to_string(Region region);
std::string to_string(Protocol protocol);

/// Any pair of per-region quantities.
template <typename T>
struct RegionPair
{
    T t;
    T r;

    T &operator[](Region region) { return region == Region::transmission ? t : r; }
    const T &operator[](Region region) const { return region == Region::transmission ? t : r; }
};

/// Raised when a numerical routine produces an unusable result (non-finite value,
/// failed factorisation, degenerate denominator).
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Derive an independent 64-bit seed for stream `index` of a master seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Draw a circularly-symmetric complex Gaussian CN(0, 1) sample.
cdouble complex_normal(Rng &rng);

/// Fill a vector with i.i.d. CN(0, 1) entries.
CVec complex_normal_vector(Eigen::Index n, Rng &rng);

} // namespace starris

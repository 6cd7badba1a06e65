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

#include "starris/types.hpp"

#include <cmath>

namespace starris
{

std::string to_string(Region region)
{
    return region == Region::transmission ? "t" : "r";
}

std::string to_string(Protocol protocol)
{
    return protocol == Protocol::energy_splitting ? "ES" : "MS";
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

cdouble complex_normal(Rng &rng)
{
    static const double scale = std::sqrt(0.5);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {scale * re, scale * im};
}

CVec complex_normal_vector(Eigen::Index n, Rng &rng)
{
    CVec out(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out(i) = complex_normal(rng);
    return out;
}

} // namespace starris

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

#include "starris/system.hpp"

namespace starris
{

double System::prelog() const
{
    return static_cast<double>(coherence_length - pilot.tau) / static_cast<double>(coherence_length);
}

void System::validate() const
{
    if (num_users() < 1)
        throw std::invalid_argument("System: at least one user is required.");
    pilot.validate(num_users());
    if (!(rho > 0.0))
        throw std::invalid_argument("System: downlink power must be positive.");
    if (coherence_length < pilot.tau)
        throw std::invalid_argument("System: coherence length must be at least the pilot length.");
}

} // namespace starris

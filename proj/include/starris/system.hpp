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

#include "starris/channel.hpp"
#include "starris/estimation.hpp"

namespace starris
{

/// Complete downlink system: statistics, training, power budget and frame length.
struct System
{
    ChannelStatistics stats;
    PilotSpec pilot;
    double rho = 1.0;         ///< downlink power budget [W]
    int coherence_length = 1; ///< tau_c [channel uses]

    int num_users() const { return stats.num_users(); }
    int num_antennas() const { return stats.num_antennas(); }
    int num_elements() const { return stats.num_elements(); }
    double noise_power() const { return pilot.sigma2; }

    /// (tau_c - tau) / tau_c
    double prelog() const;

    void validate() const;
};

} // namespace starris

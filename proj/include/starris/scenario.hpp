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

#include "starris/montecarlo.hpp"
#include "starris/optimizer.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace starris
{

/// Thermal noise power [W] over the given bandwidth at -174 dBm/Hz.
double noise_power(double bandwidth_hz);

double dbm_to_watt(double dbm);

enum class Scheme
{
    energy_splitting,  ///< optimized amplitudes and phases, or their binary rounding when that is better
    mode_switching,    ///< optimized energy splitting rounded to binary amplitudes
    conventional,      ///< first n_t elements transmit, the rest reflect, phases optimized
    random_phases      ///< equal split with uniformly random phases, averaged over the starts
};

Scheme parse_scheme(const std::string &name);
std::string to_string(Scheme scheme);

struct ScenarioSpec
{
    std::string label;
    Scheme scheme = Scheme::energy_splitting;
    bool direct_link = true;
    int conventional_n_t = -1; ///< -1 selects N / 2 (rounded down)
};

enum class SweepParameter
{
    none,
    num_elements,
    num_antennas,
    snr_db,
    ris_spacing,
    convergence ///< one row per iteration and start of the optimizer, no value list
};

SweepParameter parse_sweep_parameter(const std::string &name);
std::string to_string(SweepParameter parameter);

struct ScenarioConfig
{
    // dimensions
    int num_antennas = 64;
    int ris_h = 8;
    int ris_v = 8;
    int users_t = 2;
    int users_r = 2;
    int coherence_length = 200;
    int pilot_length = 0; ///< 0 selects K

    // geometry [m]
    std::array<double, 2> bs_xy = {0.0, 0.0};
    std::array<double, 2> ris_xy = {50.0, 10.0};
    double d0 = 20.0;

    // propagation
    double carrier_hz = 3.5e9;
    double exponent_bs_ris = 2.0;
    double exponent_ris_ue = 2.0;
    double exponent_direct = 3.0;
    double penetration_db = 15.0;
    double element_area = 0.0; ///< [m^2], 0 selects spacing_h * spacing_v * lambda^2

    // powers
    std::optional<double> snr_db;  ///< rho / sigma^2; exclusive with rho_dbm
    std::optional<double> rho_dbm;
    std::optional<double> pilot_dbm; ///< per-user pilot power, default rho / K
    double bandwidth_hz = 200e3;

    // correlation
    BsCorrelationModel bs_model = BsCorrelationModel::exponential;
    double bs_param = 0.5;
    double ris_spacing = 0.25; ///< [wavelengths], both axes

    std::vector<ScenarioSpec> scenarios;
    SweepParameter sweep = SweepParameter::none;
    std::vector<double> sweep_values;

    PgamOptions optimizer;
    bool mc_enabled = true;
    int mc_trials = 1000;
    std::uint64_t seed = 1;
    std::string output;

    int num_users() const { return users_t + users_r; }
    int num_elements() const { return ris_h * ris_v; }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Parse a JSON scenario description; errors name the offending field.
ScenarioConfig parse_scenario(const std::string &json_text);
ScenarioConfig load_scenario(const std::string &path);

struct UserPlacement
{
    std::vector<std::array<double, 2>> positions; ///< transmission users first
    std::vector<Region> regions;
};

/// Users of each region equally spaced on a segment of length d0 centred d0/2 before (r) or behind (t)
/// the surface.
UserPlacement place_users(const ScenarioConfig &config);

System build_system(const ScenarioConfig &config, bool direct_link = true);

/// Apply the sweep value to a copy of the configuration.
ScenarioConfig apply_sweep(const ScenarioConfig &config, double value);

struct SchemeResult
{
    StarConfig config;
    double sum_se = 0.0;
    int iterations = 0;
    std::vector<PgamTrace> traces; ///< per start, empty for the random baseline
    std::vector<StarConfig> draws; ///< random baseline only, every averaged configuration
};

SchemeResult run_scheme(const System &system, const ScenarioSpec &spec, const PgamOptions &options);

struct CsvRow
{
    double sweep_value = 0.0;
    std::string label;
    double analytic_se = 0.0;
    std::optional<double> mc_se;
    std::optional<double> mc_std_err;
    int iterations = 0;
    std::optional<double> wall_time_s;
    std::uint64_t seed = 0;
};

inline constexpr const char *csv_header =
    "sweep_parameter,sweep_value,label,analytic_se,mc_se,mc_stderr,iterations,wall_time_s,seed";

void write_csv_header(std::ostream &out);
void write_csv_row(std::ostream &out, SweepParameter parameter, const CsvRow &row);

struct RunOptions
{
    bool record_time = false;
    unsigned threads = 0;
};

/// Run every sweep point and scenario. Rows are written in sweep order; when a point fails the rows of
/// all earlier points are flushed before the error propagates.
std::vector<CsvRow> run_experiment(const ScenarioConfig &config, std::ostream &out, const RunOptions &run = {});

} // namespace starris

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

#include <catch_amalgamated.hpp>

#include "starris/scenario.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

using namespace starris;

namespace
{

double to_dbm(double watt)
{
    return 10.0 * std::log10(watt) + 30.0;
}

std::string invalid_message(const std::string &json_text)
{
    try
    {
        parse_scenario(json_text);
    }
    catch (const std::invalid_argument &e)
    {
        return e.what();
    }
    return "";
}

const char *small_config = R"({
  "seed": 7,
  "dims": {"M": 6, "N_h": 3, "N_v": 3, "K_t": 1, "K_r": 2, "tau_c": 100},
  "power": {"snr_db": 90, "pilot_dbm": 0},
  "scenarios": [
    {"label": "ES", "protocol": "es"},
    {"label": "MS", "protocol": "ms"},
    {"label": "ES-nodirect", "protocol": "es", "direct_link": false},
    {"label": "random", "protocol": "random"},
    {"label": "conv", "protocol": "conventional", "n_t": 4}
  ],
  "sweep": {"parameter": "N", "values": [4, 9]},
  "optimizer": {"mu_init": 1e4, "max_iters": 25, "n_starts": 2},
  "mc": {"enabled": true, "trials": 100}
})";

std::vector<std::vector<std::string>> parse_csv(const std::string &text)
{
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream row(line);
        while (std::getline(row, cell, ','))
            cells.push_back(cell);
        if (!line.empty() && line.back() == ',')
            cells.emplace_back();
        out.push_back(cells);
    }
    return out;
}

} // namespace

TEST_CASE("scenario - Thermal noise power")
{
    CHECK(std::abs(noise_power(200e3) - 7.96e-16) < 0.01e-16);
    CHECK(std::abs(to_dbm(noise_power(200e3)) - (-120.9897)) < 1e-3);
    CHECK(std::abs(to_dbm(noise_power(1.0)) + 174.0) < 1e-12);
    CHECK(std::abs(to_dbm(noise_power(10.0)) + 164.0) < 1e-12);
    CHECK_THROWS_AS(noise_power(0.0), std::invalid_argument);
    CHECK_THROWS_AS(noise_power(-5.0), std::invalid_argument);
    CHECK(std::abs(dbm_to_watt(30.0) - 1.0) < 1e-15);
}

TEST_CASE("scenario - Scheme and sweep names")
{
    CHECK(parse_scheme("es") == Scheme::energy_splitting);
    CHECK(parse_scheme("ms") == Scheme::mode_switching);
    CHECK(parse_scheme("conventional") == Scheme::conventional);
    CHECK(parse_scheme("random") == Scheme::random_phases);
    CHECK_THROWS_AS(parse_scheme("star"), std::invalid_argument);
    for (auto s : {Scheme::energy_splitting, Scheme::mode_switching, Scheme::conventional, Scheme::random_phases})
        CHECK(parse_scheme(to_string(s)) == s);
    for (auto p : {SweepParameter::none, SweepParameter::num_elements, SweepParameter::num_antennas,
                   SweepParameter::snr_db, SweepParameter::ris_spacing, SweepParameter::convergence})
        CHECK(parse_sweep_parameter(to_string(p)) == p);
}

TEST_CASE("scenario - Parsing defaults")
{
    const auto c = parse_scenario(R"({"power": {"snr_db": 80}, "scenarios": [{"protocol": "es"}]})");
    CHECK(c.num_antennas == 64);
    CHECK(c.num_elements() == 64);
    CHECK(c.num_users() == 4);
    CHECK(c.coherence_length == 200);
    CHECK(c.ris_xy[0] == 50.0);
    CHECK(c.ris_xy[1] == 10.0);
    CHECK(c.bandwidth_hz == 200e3);
    CHECK(c.scenarios.size() == 1);
    CHECK(c.scenarios[0].label == "es");
    CHECK(c.scenarios[0].direct_link);
    CHECK(c.optimizer.n_starts == 5);
    CHECK(c.sweep == SweepParameter::none);
}

TEST_CASE("scenario - Parse errors name the field")
{
    const std::string base_power = R"("power": {"snr_db": 80}, )";
    const std::string scen = R"("scenarios": [{"protocol": "es"}])";
    CHECK_THAT(invalid_message("{" + base_power + R"("dims": {"M": 0}, )" + scen + "}"),
               Catch::Matchers::ContainsSubstring("dims.M"));
    CHECK_THAT(invalid_message("{" + base_power + R"("dims": {"M": "many"}, )" + scen + "}"),
               Catch::Matchers::ContainsSubstring("dims.M"));
    CHECK_THAT(invalid_message("{" + base_power + R"("dims": {"Q": 3}, )" + scen + "}"),
               Catch::Matchers::ContainsSubstring("dims.Q"));
    CHECK_THAT(invalid_message("{" + base_power + R"("dims": {"tau": 2}, )" + scen + "}"),
               Catch::Matchers::ContainsSubstring("dims.tau"));
    CHECK_THAT(invalid_message("{" + scen + "}"), Catch::Matchers::ContainsSubstring("power.snr_db"));
    CHECK_THAT(invalid_message(R"({"power": {"snr_db": 80, "rho_dbm": 30}, )" + scen + "}"),
               Catch::Matchers::ContainsSubstring("power.snr_db"));
    CHECK_THAT(invalid_message("{" + base_power + R"("scenarios": [{"protocol": "xx"}]})"),
               Catch::Matchers::ContainsSubstring("scenarios[0].protocol"));
    CHECK_THAT(invalid_message("{" + base_power + R"("scenarios": [{"label": "a"}]})"),
               Catch::Matchers::ContainsSubstring("scenarios[0].protocol"));
    CHECK_THAT(invalid_message("{" + base_power + R"("scenarios": [{"protocol": "es", "n_t": 3}]})"),
               Catch::Matchers::ContainsSubstring("scenarios[0].n_t"));
    CHECK_THAT(invalid_message("{" + base_power +
                               R"("scenarios": [{"protocol": "es", "label": "a"}, {"protocol": "ms", "label": "a"}]})"),
               Catch::Matchers::ContainsSubstring("scenarios[1].label"));
    CHECK_THAT(invalid_message("{" + base_power + scen + R"(, "sweep": {"parameter": "N", "values": [10]}})"),
               Catch::Matchers::ContainsSubstring("sweep.values"));
    CHECK_THAT(invalid_message("{" + base_power + scen + R"(, "sweep": {"parameter": "Z", "values": [1]}})"),
               Catch::Matchers::ContainsSubstring("sweep.parameter"));
    CHECK_THAT(invalid_message("{" + base_power + scen + R"(, "optimizer": {"kappa": 2}})"),
               Catch::Matchers::ContainsSubstring("optimizer"));
    CHECK_THAT(invalid_message("{" + base_power + scen + R"(, "mc": {"trials": 1}})"),
               Catch::Matchers::ContainsSubstring("mc.trials"));
    CHECK_THAT(invalid_message("{" + base_power + scen + R"(, "correlation": {"bs_param": 1.5}})"),
               Catch::Matchers::ContainsSubstring("correlation.bs_param"));
    CHECK_THAT(invalid_message("{" + base_power + scen + R"(, "colour": 1})"),
               Catch::Matchers::ContainsSubstring("colour"));
    CHECK_THAT(invalid_message("{" + base_power), Catch::Matchers::ContainsSubstring("malformed JSON"));
    CHECK_THROWS_AS(load_scenario("/nonexistent/config.json"), std::invalid_argument);
}

TEST_CASE("scenario - User placement")
{
    auto c = parse_scenario(R"({"power": {"snr_db": 80}, "scenarios": [{"protocol": "es"}],
                                "dims": {"K_t": 3, "K_r": 1}})");
    const auto p = place_users(c);
    REQUIRE(p.positions.size() == 4);
    CHECK(p.regions[0] == Region::transmission);
    CHECK(p.regions[3] == Region::reflection);
    CHECK(p.positions[0][0] == 40.0);
    CHECK(p.positions[1][0] == 50.0);
    CHECK(p.positions[2][0] == 60.0);
    for (int k = 0; k < 3; ++k)
        CHECK(p.positions[static_cast<std::size_t>(k)][1] == 20.0);
    CHECK(p.positions[3][0] == 50.0);
    CHECK(p.positions[3][1] == 0.0);
}

TEST_CASE("scenario - System construction")
{
    auto c = parse_scenario(R"({"power": {"snr_db": 90, "pilot_dbm": 0}, "scenarios": [{"protocol": "es"}],
                                "dims": {"M": 8, "N_h": 2, "N_v": 3, "K_t": 1, "K_r": 1}})");
    const System sys = build_system(c);
    const double sigma2 = noise_power(200e3);
    CHECK(std::abs(sys.rho / sigma2 - 1e9) < 1e-3);
    CHECK(sys.pilot.sigma2 == sigma2);
    CHECK(std::abs(sys.pilot.power - 1e-3) < 1e-18);
    CHECK(sys.pilot.tau == 2);
    CHECK(sys.num_antennas() == 8);
    CHECK(sys.num_elements() == 6);

    const double lambda = 299792458.0 / 3.5e9;
    const double area = 0.25 * 0.25 * lambda * lambda;
    const double d_bs_ris = std::hypot(50.0, 10.0);
    CHECK(std::abs(sys.stats.gains.beta_g - area * std::pow(d_bs_ris, -2.0)) <= 1e-12 * sys.stats.gains.beta_g);
    // transmission user at (50, 20): 10 m from the surface, direct link with 15 dB penetration loss
    CHECK(std::abs(sys.stats.gains.beta_tilde(0) - area / 100.0) <= 1e-12 * sys.stats.gains.beta_tilde(0));
    const double direct = area * std::pow(std::hypot(50.0, 20.0), -3.0) * std::pow(10.0, -1.5);
    CHECK(std::abs(sys.stats.gains.beta_bar(0) - direct) <= 1e-12 * direct);

    const System nodirect = build_system(c, false);
    CHECK(nodirect.stats.gains.beta_bar.norm() == 0.0);
    CHECK(nodirect.stats.gains.beta_g == sys.stats.gains.beta_g);

    c.snr_db.reset();
    c.rho_dbm = 30.0;
    c.pilot_dbm.reset();
    const System by_power = build_system(c);
    CHECK(std::abs(by_power.rho - 1.0) < 1e-12);
    CHECK(std::abs(by_power.pilot.power - 0.5) < 1e-12);
}

TEST_CASE("scenario - Sweeps")
{
    auto c = parse_scenario(small_config);
    const auto n9 = apply_sweep(c, 9.0);
    CHECK(n9.ris_h == 3);
    CHECK(n9.ris_v == 3);
    c.sweep = SweepParameter::snr_db;
    c.snr_db.reset();
    c.rho_dbm = 10.0;
    const auto s = apply_sweep(c, 70.0);
    CHECK(*s.snr_db == 70.0);
    CHECK_FALSE(s.rho_dbm.has_value());
    c.sweep = SweepParameter::num_antennas;
    CHECK(apply_sweep(c, 12.0).num_antennas == 12);
    c.sweep = SweepParameter::ris_spacing;
    CHECK(apply_sweep(c, 0.5).ris_spacing == 0.5);
}

TEST_CASE("scenario - Experiment rows and reproducibility")
{
    const auto c = parse_scenario(small_config);

    std::ostringstream first;
    const auto rows = run_experiment(c, first, {false, 1});
    std::ostringstream second;
    run_experiment(c, second, {false, 3});
    CHECK(first.str() == second.str());

    const auto table = parse_csv(first.str());
    REQUIRE(table.size() == 1 + 2 * 5);
    CHECK(first.str().substr(0, first.str().find('\n')) == csv_header);
    for (std::size_t i = 1; i < table.size(); ++i)
    {
        REQUIRE(table[i].size() == 9);
        CHECK(table[i][0] == "N");
        CHECK(table[i][7].empty());
        CHECK(table[i][8] == "7");
    }

    REQUIRE(rows.size() == 10);
    for (std::size_t p = 0; p < 2; ++p)
    {
        const auto *point = &rows[p * 5];
        CHECK(point[0].label == "ES");
        CHECK(point[0].analytic_se >= point[1].analytic_se);
        CHECK(point[2].analytic_se < point[0].analytic_se);
        CHECK(point[3].iterations == 0);
        for (int s = 0; s < 5; ++s)
        {
            CHECK(point[s].mc_se.has_value());
            CHECK(*point[s].mc_std_err > 0.0);
        }
    }
    CHECK(rows[0].sweep_value == 4.0);
    CHECK(rows[5].sweep_value == 9.0);

    // seeds change the optimizer and the Monte Carlo draws
    auto reseeded = c;
    reseeded.seed = 8;
    std::ostringstream third;
    run_experiment(reseeded, third, {false, 1});
    CHECK(third.str() != first.str());
}

TEST_CASE("scenario - Monte Carlo columns can be disabled")
{
    auto c = parse_scenario(small_config);
    c.mc_enabled = false;
    c.sweep_values = {4.0};
    std::ostringstream out;
    const auto rows = run_experiment(c, out);
    for (const auto &row : rows)
        CHECK_FALSE(row.mc_se.has_value());
    const auto table = parse_csv(out.str());
    CHECK(table[1][4].empty());
    CHECK(table[1][5].empty());
}

TEST_CASE("scenario - Convergence rows")
{
    auto c = parse_scenario(small_config);
    c.sweep = SweepParameter::convergence;
    c.sweep_values.clear();
    c.scenarios = {ScenarioSpec{"ES", Scheme::energy_splitting}};
    c.mc_enabled = false;
    std::ostringstream out;
    const auto rows = run_experiment(c, out);
    REQUIRE_FALSE(rows.empty());
    CHECK(rows.front().label == "ES/start0");
    CHECK(rows.back().label == "ES/start1");
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].label == rows[i - 1].label)
        {
            CHECK(rows[i].sweep_value == rows[i - 1].sweep_value + 1.0);
            CHECK(rows[i].analytic_se >= rows[i - 1].analytic_se);
        }
}

TEST_CASE("scenario - Rows before a failing point are flushed")
{
    auto c = parse_scenario(R"({
      "dims": {"M": 4, "N_h": 4, "N_v": 4, "K_t": 1, "K_r": 1},
      "power": {"snr_db": 90, "pilot_dbm": 0},
      "scenarios": [{"label": "conv", "protocol": "conventional", "n_t": 10}],
      "sweep": {"parameter": "N", "values": [16, 9]},
      "optimizer": {"max_iters": 5, "n_starts": 1},
      "mc": {"enabled": false}
    })");
    std::ostringstream out;
    CHECK_THROWS_AS(run_experiment(c, out), std::invalid_argument);
    const auto table = parse_csv(out.str());
    REQUIRE(table.size() == 2);
    CHECK(table[1][1] == "16");
    CHECK(table[1][2] == "conv");
}

TEST_CASE("scenario - Checked-in experiment configs are valid")
{
    for (const char *name : {"convergence", "se_vs_n", "se_vs_m", "se_vs_snr", "se_vs_spacing"})
    {
        INFO(name);
        const auto c = load_scenario(std::string(STARRIS_CONFIG_DIR) + "/" + name + ".json");
        CHECK(c.num_users() == 4);
        CHECK(c.optimizer.mu_init == 1e4);
    }
}

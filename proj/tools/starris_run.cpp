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

#include "starris/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

int main(int argc, char **argv)
{
    CLI::App app{"Sweep runner for STAR-RIS assisted massive MIMO sum spectral efficiency"};

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::optional<int> mc_trials;
    bool no_mc = false;
    bool timing = false;
    unsigned threads = 0;

    app.add_option("--config", config_path, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Master seed, overrides the config");
    app.add_option("--out", out_path, "CSV output path, overrides the config; '-' writes to stdout");
    app.add_option("--mc-trials", mc_trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    app.add_flag("--no-mc", no_mc, "Skip the Monte Carlo columns");
    app.add_flag("--timing", timing, "Fill the wall_time_s column (the CSV is then no longer reproducible)");
    app.add_option("--threads", threads, "Worker threads, 0 = hardware concurrency");

    CLI11_PARSE(app, argc, argv);

    try
    {
        auto config = starris::load_scenario(config_path);
        if (seed)
            config.seed = *seed;
        if (mc_trials)
            config.mc_trials = *mc_trials;
        if (no_mc)
            config.mc_enabled = false;
        if (!out_path.empty())
            config.output = out_path;
        config.validate();

        starris::RunOptions run;
        run.record_time = timing;
        run.threads = threads;

        if (config.output.empty() || config.output == "-")
        {
            starris::run_experiment(config, std::cout, run);
        }
        else
        {
            std::ofstream out(config.output);
            if (!out)
            {
                std::cerr << "error: cannot write '" << config.output << "'\n";
                return 2;
            }
            starris::run_experiment(config, out, run);
        }
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

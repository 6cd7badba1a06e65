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
#include "starris/parallel.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace starris
{

namespace
{

using nlohmann::json;

constexpr double speed_of_light = 299792458.0;
constexpr std::uint64_t mc_stream = 0x6d6f6d656e7473ULL;

[[noreturn]] void field_error(const std::string &field, const std::string &why)
{
    throw std::invalid_argument("config field '" + field + "': " + why);
}

void reject_unknown(const json &node, const std::string &path, std::initializer_list<const char *> keys)
{
    if (!node.is_object())
        field_error(path, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto &item : node.items())
        if (!allowed.contains(item.key()))
            field_error(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
}

template <typename T>
void read(const json &node, const std::string &path, const char *key, T &target)
{
    if (!node.contains(key))
        return;
    const std::string field = path.empty() ? std::string(key) : path + "." + key;
    try
    {
        target = node.at(key).get<T>();
    }
    catch (const json::exception &)
    {
        field_error(field, "wrong type");
    }
}

template <typename T>
void read_optional(const json &node, const std::string &path, const char *key, std::optional<T> &target)
{
    if (!node.contains(key))
        return;
    T value{};
    read(node, path, key, value);
    target = value;
}

void require_positive(const std::string &field, double value)
{
    if (!(value > 0.0) || !std::isfinite(value))
        field_error(field, "must be positive");
}

void require_positive(const std::string &field, int value)
{
    if (value <= 0)
        field_error(field, "must be positive");
}

std::string format_double(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

double distance(const std::array<double, 2> &a, const std::array<double, 2> &b)
{
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

StarConfig conventional_point(int num_elements, int n_t, std::uint64_t seed, int index)
{
    StarConfig config = initial_point(num_elements, seed, index);
    for (int n = 0; n < num_elements; ++n)
    {
        config.beta_t(n) = n < n_t ? 1.0 : 0.0;
        config.beta_r(n) = n < n_t ? 0.0 : 1.0;
    }
    config.protocol = Protocol::mode_switching;
    return config;
}

} // namespace

double noise_power(double bandwidth_hz)
{
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("noise_power: bandwidth must be positive.");
    return dbm_to_watt(-174.0 + 10.0 * std::log10(bandwidth_hz));
}

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

Scheme parse_scheme(const std::string &name)
{
    if (name == "es")
        return Scheme::energy_splitting;
    if (name == "ms")
        return Scheme::mode_switching;
    if (name == "conventional")
        return Scheme::conventional;
    if (name == "random")
        return Scheme::random_phases;
    throw std::invalid_argument("Unknown protocol '" + name + "', expected es, ms, conventional or random.");
}

std::string to_string(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::energy_splitting:
        return "es";
    case Scheme::mode_switching:
        return "ms";
    case Scheme::conventional:
        return "conventional";
    case Scheme::random_phases:
        return "random";
    }
    return "?";
}

SweepParameter parse_sweep_parameter(const std::string &name)
{
    if (name == "none")
        return SweepParameter::none;
    if (name == "N")
        return SweepParameter::num_elements;
    if (name == "M")
        return SweepParameter::num_antennas;
    if (name == "snr_db")
        return SweepParameter::snr_db;
    if (name == "ris_spacing")
        return SweepParameter::ris_spacing;
    if (name == "convergence")
        return SweepParameter::convergence;
    throw std::invalid_argument("Unknown sweep parameter '" + name + "'.");
}

std::string to_string(SweepParameter parameter)
{
    switch (parameter)
    {
    case SweepParameter::none:
        return "none";
    case SweepParameter::num_elements:
        return "N";
    case SweepParameter::num_antennas:
        return "M";
    case SweepParameter::snr_db:
        return "snr_db";
    case SweepParameter::ris_spacing:
        return "ris_spacing";
    case SweepParameter::convergence:
        return "convergence";
    }
    return "?";
}

void ScenarioConfig::validate() const
{
    require_positive("dims.M", num_antennas);
    require_positive("dims.N_h", ris_h);
    require_positive("dims.N_v", ris_v);
    if (users_t < 0)
        field_error("dims.K_t", "must be non-negative");
    if (users_r < 0)
        field_error("dims.K_r", "must be non-negative");
    if (num_users() == 0)
        field_error("dims.K_t", "K_t + K_r must be positive");
    require_positive("dims.tau_c", coherence_length);
    const int tau = pilot_length == 0 ? num_users() : pilot_length;
    if (tau < num_users())
        field_error("dims.tau", "must be at least K = K_t + K_r");
    if (tau >= coherence_length)
        field_error("dims.tau", "must be smaller than tau_c");
    require_positive("geometry.d0", d0);
    require_positive("propagation.carrier_hz", carrier_hz);
    require_positive("propagation.exponent_bs_ris", exponent_bs_ris);
    require_positive("propagation.exponent_ris_ue", exponent_ris_ue);
    require_positive("propagation.exponent_direct", exponent_direct);
    if (element_area < 0.0)
        field_error("propagation.element_area", "must be non-negative");
    if (snr_db.has_value() == rho_dbm.has_value())
        field_error("power.snr_db", "exactly one of power.snr_db and power.rho_dbm must be given");
    require_positive("power.bandwidth_hz", bandwidth_hz);
    if (!(bs_param >= 0.0 && bs_param < 1.0))
        field_error("correlation.bs_param", "must lie in [0, 1)");
    require_positive("correlation.ris_spacing", ris_spacing);
    if (scenarios.empty())
        field_error("scenarios", "at least one scenario is required");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < scenarios.size(); ++i)
    {
        const auto &s = scenarios[i];
        const std::string path = "scenarios[" + std::to_string(i) + "]";
        if (s.label.empty())
            field_error(path + ".label", "must not be empty");
        if (s.label.find_first_of(",\"\n") != std::string::npos)
            field_error(path + ".label", "must not contain commas, quotes or newlines");
        if (!labels.insert(s.label).second)
            field_error(path + ".label", "duplicate label");
        if (s.scheme == Scheme::conventional && s.conventional_n_t > num_elements())
            field_error(path + ".n_t", "exceeds the number of elements");
    }
    if (sweep != SweepParameter::none && sweep != SweepParameter::convergence && sweep_values.empty())
        field_error("sweep.values", "a sweep needs at least one value");
    for (double v : sweep_values)
    {
        if (sweep == SweepParameter::num_elements || sweep == SweepParameter::num_antennas)
        {
            if (v < 1.0 || v != std::floor(v))
                field_error("sweep.values", "counts must be positive integers");
            if (sweep == SweepParameter::num_elements)
            {
                const auto side = static_cast<int>(std::lround(std::sqrt(v)));
                if (side * side != static_cast<int>(v))
                    field_error("sweep.values", "element counts must be perfect squares");
            }
        }
        if (sweep == SweepParameter::ris_spacing && !(v > 0.0))
            field_error("sweep.values", "spacings must be positive");
        if (sweep == SweepParameter::snr_db && !std::isfinite(v))
            field_error("sweep.values", "must be finite");
    }
    try
    {
        optimizer.validate();
    }
    catch (const std::invalid_argument &e)
    {
        field_error("optimizer", e.what());
    }
    if (mc_enabled && mc_trials < 2)
        field_error("mc.trials", "must be at least 2");
}

ScenarioConfig parse_scenario(const std::string &json_text)
{
    json root;
    try
    {
        root = json::parse(json_text);
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
    }
    reject_unknown(root, "",
                   {"seed", "output", "dims", "geometry", "propagation", "power", "correlation", "scenarios", "sweep",
                    "optimizer", "mc"});

    ScenarioConfig c;
    read(root, "", "seed", c.seed);
    read(root, "", "output", c.output);

    if (root.contains("dims"))
    {
        const auto &d = root["dims"];
        reject_unknown(d, "dims", {"M", "N_h", "N_v", "K_t", "K_r", "tau_c", "tau"});
        read(d, "dims", "M", c.num_antennas);
        read(d, "dims", "N_h", c.ris_h);
        read(d, "dims", "N_v", c.ris_v);
        read(d, "dims", "K_t", c.users_t);
        read(d, "dims", "K_r", c.users_r);
        read(d, "dims", "tau_c", c.coherence_length);
        read(d, "dims", "tau", c.pilot_length);
    }
    if (root.contains("geometry"))
    {
        const auto &g = root["geometry"];
        reject_unknown(g, "geometry", {"bs", "ris", "d0"});
        read(g, "geometry", "bs", c.bs_xy);
        read(g, "geometry", "ris", c.ris_xy);
        read(g, "geometry", "d0", c.d0);
    }
    if (root.contains("propagation"))
    {
        const auto &p = root["propagation"];
        reject_unknown(p, "propagation",
                       {"carrier_hz", "exponent_bs_ris", "exponent_ris_ue", "exponent_direct", "penetration_db",
                        "element_area"});
        read(p, "propagation", "carrier_hz", c.carrier_hz);
        read(p, "propagation", "exponent_bs_ris", c.exponent_bs_ris);
        read(p, "propagation", "exponent_ris_ue", c.exponent_ris_ue);
        read(p, "propagation", "exponent_direct", c.exponent_direct);
        read(p, "propagation", "penetration_db", c.penetration_db);
        read(p, "propagation", "element_area", c.element_area);
    }
    if (root.contains("power"))
    {
        const auto &p = root["power"];
        reject_unknown(p, "power", {"snr_db", "rho_dbm", "pilot_dbm", "bandwidth_hz"});
        read_optional(p, "power", "snr_db", c.snr_db);
        read_optional(p, "power", "rho_dbm", c.rho_dbm);
        read_optional(p, "power", "pilot_dbm", c.pilot_dbm);
        read(p, "power", "bandwidth_hz", c.bandwidth_hz);
    }
    if (root.contains("correlation"))
    {
        const auto &r = root["correlation"];
        reject_unknown(r, "correlation", {"bs_model", "bs_param", "ris_spacing"});
        std::string model = "exponential";
        read(r, "correlation", "bs_model", model);
        try
        {
            c.bs_model = parse_bs_correlation_model(model);
        }
        catch (const std::invalid_argument &e)
        {
            field_error("correlation.bs_model", e.what());
        }
        read(r, "correlation", "bs_param", c.bs_param);
        read(r, "correlation", "ris_spacing", c.ris_spacing);
    }
    if (root.contains("scenarios"))
    {
        const auto &list = root["scenarios"];
        if (!list.is_array())
            field_error("scenarios", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i)
        {
            const std::string path = "scenarios[" + std::to_string(i) + "]";
            const auto &node = list[i];
            reject_unknown(node, path, {"label", "protocol", "direct_link", "n_t"});
            if (!node.contains("protocol"))
                field_error(path + ".protocol", "missing");
            ScenarioSpec spec;
            std::string protocol;
            read(node, path, "protocol", protocol);
            try
            {
                spec.scheme = parse_scheme(protocol);
            }
            catch (const std::invalid_argument &e)
            {
                field_error(path + ".protocol", e.what());
            }
            spec.label = protocol;
            read(node, path, "label", spec.label);
            read(node, path, "direct_link", spec.direct_link);
            read(node, path, "n_t", spec.conventional_n_t);
            if (node.contains("n_t") && spec.scheme != Scheme::conventional)
                field_error(path + ".n_t", "only valid for the conventional protocol");
            if (node.contains("n_t") && spec.conventional_n_t < 0)
                field_error(path + ".n_t", "must be non-negative");
            c.scenarios.push_back(spec);
        }
    }
    if (root.contains("sweep"))
    {
        const auto &s = root["sweep"];
        reject_unknown(s, "sweep", {"parameter", "values"});
        std::string parameter = "none";
        read(s, "sweep", "parameter", parameter);
        try
        {
            c.sweep = parse_sweep_parameter(parameter);
        }
        catch (const std::invalid_argument &e)
        {
            field_error("sweep.parameter", e.what());
        }
        read(s, "sweep", "values", c.sweep_values);
    }
    if (root.contains("optimizer"))
    {
        const auto &o = root["optimizer"];
        reject_unknown(o, "optimizer", {"mu_init", "kappa", "tol", "max_iters", "max_backtracks", "n_starts"});
        read(o, "optimizer", "mu_init", c.optimizer.mu_init);
        read(o, "optimizer", "kappa", c.optimizer.kappa);
        read(o, "optimizer", "tol", c.optimizer.tol);
        read(o, "optimizer", "max_iters", c.optimizer.max_iters);
        read(o, "optimizer", "max_backtracks", c.optimizer.max_backtracks);
        read(o, "optimizer", "n_starts", c.optimizer.n_starts);
    }
    if (root.contains("mc"))
    {
        const auto &m = root["mc"];
        reject_unknown(m, "mc", {"enabled", "trials"});
        read(m, "mc", "enabled", c.mc_enabled);
        read(m, "mc", "trials", c.mc_trials);
    }
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("Cannot open config file '" + path + "'.");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

UserPlacement place_users(const ScenarioConfig &config)
{
    UserPlacement out;
    auto segment = [&](int count, double y, Region region) {
        for (int i = 0; i < count; ++i)
        {
            const double frac = count == 1 ? 0.5 : static_cast<double>(i) / (count - 1);
            out.positions.push_back({config.ris_xy[0] - 0.5 * config.d0 + frac * config.d0, y});
            out.regions.push_back(region);
        }
    };
    segment(config.users_t, config.ris_xy[1] + 0.5 * config.d0, Region::transmission);
    segment(config.users_r, config.ris_xy[1] - 0.5 * config.d0, Region::reflection);
    return out;
}

System build_system(const ScenarioConfig &config, bool direct_link)
{
    config.validate();
    const double wavelength = speed_of_light / config.carrier_hz;
    const ArrayGeometry geom{config.ris_h, config.ris_v, config.ris_spacing, config.ris_spacing};
    const double area = config.element_area > 0.0
                            ? config.element_area
                            : geom.spacing_h * geom.spacing_v * wavelength * wavelength;

    const auto users = place_users(config);
    const int k_users = config.num_users();
    RVec beta_bar(k_users);
    RVec beta_tilde(k_users);
    for (int k = 0; k < k_users; ++k)
    {
        const auto &pos = users.positions[static_cast<std::size_t>(k)];
        beta_tilde(k) = path_gain(distance(config.ris_xy, pos), config.exponent_ris_ue, area);
        beta_bar(k) = direct_link
                          ? path_gain(distance(config.bs_xy, pos), config.exponent_direct, area, config.penetration_db)
                          : 0.0;
    }
    const double beta_g = path_gain(distance(config.bs_xy, config.ris_xy), config.exponent_bs_ris, area);

    auto corr = CorrelationPair::make(build_bs_correlation(config.num_antennas, config.bs_model, config.bs_param),
                                      build_ris_correlation(geom));
    System system{ChannelStatistics::make(std::move(corr), LinkGains::make(beta_g, beta_bar, beta_tilde), users.regions),
                  {}, 1.0, config.coherence_length};

    const double sigma2 = noise_power(config.bandwidth_hz);
    system.rho = config.snr_db ? std::pow(10.0, *config.snr_db / 10.0) * sigma2 : dbm_to_watt(*config.rho_dbm);
    system.pilot.tau = config.pilot_length == 0 ? k_users : config.pilot_length;
    system.pilot.sigma2 = sigma2;
    system.pilot.power = config.pilot_dbm ? dbm_to_watt(*config.pilot_dbm) : system.rho / k_users;
    system.validate();
    return system;
}

ScenarioConfig apply_sweep(const ScenarioConfig &config, double value)
{
    ScenarioConfig out = config;
    switch (config.sweep)
    {
    case SweepParameter::num_elements:
        out.ris_h = out.ris_v = static_cast<int>(std::lround(std::sqrt(value)));
        break;
    case SweepParameter::num_antennas:
        out.num_antennas = static_cast<int>(std::lround(value));
        break;
    case SweepParameter::snr_db:
        out.snr_db = value;
        out.rho_dbm.reset();
        break;
    case SweepParameter::ris_spacing:
        out.ris_spacing = value;
        break;
    case SweepParameter::none:
    case SweepParameter::convergence:
        break;
    }
    return out;
}

SchemeResult run_scheme(const System &system, const ScenarioSpec &spec, const PgamOptions &options)
{
    const int n = system.num_elements();
    SchemeResult out;
    switch (spec.scheme)
    {
    case Scheme::energy_splitting:
    case Scheme::mode_switching: {
        auto ms = run_multi_start(system, options);
        const auto &best = ms.traces[static_cast<std::size_t>(ms.best)];
        out.iterations = best.iterations();
        const StarConfig rounded = round_to_ms(best.final_config);
        const double rounded_se = sum_se(rounded, system).sum_se;
        if (spec.scheme == Scheme::mode_switching)
        {
            out.config = rounded;
            out.sum_se = rounded_se;
        }
        else if (rounded_se > best.final_objective())
        {
            // binary amplitudes are feasible for energy splitting too; keep whichever is better
            out.config = rounded;
            out.config.protocol = Protocol::energy_splitting;
            out.sum_se = rounded_se;
        }
        else
        {
            out.config = best.final_config;
            out.sum_se = best.final_objective();
        }
        out.traces = std::move(ms.traces);
        break;
    }
    case Scheme::conventional: {
        const int n_t = spec.conventional_n_t < 0 ? n / 2 : spec.conventional_n_t;
        if (n_t > n)
            throw std::invalid_argument("run_scheme: n_t exceeds the number of elements.");
        PgamOptions phase_only = options;
        phase_only.optimize_amplitudes = false;
        auto ms = run_multi_start(system, phase_only,
                                  [&](int index) { return conventional_point(n, n_t, options.seed, index); });
        const auto &best = ms.traces[static_cast<std::size_t>(ms.best)];
        out.iterations = best.iterations();
        out.config = best.final_config;
        out.sum_se = best.final_objective();
        out.traces = std::move(ms.traces);
        break;
    }
    case Scheme::random_phases: {
        double total = 0.0;
        for (int s = 0; s < options.n_starts; ++s)
        {
            Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(s)));
            const auto config = StarConfig::random_phases(n, rng);
            total += sum_se(config, system).sum_se;
            out.draws.push_back(config);
        }
        out.sum_se = total / options.n_starts;
        out.config = out.draws.front();
        break;
    }
    }
    return out;
}

void write_csv_header(std::ostream &out)
{
    out << csv_header << '\n';
}

void write_csv_row(std::ostream &out, SweepParameter parameter, const CsvRow &row)
{
    out << to_string(parameter) << ',' << format_double(row.sweep_value) << ',' << row.label << ','
        << format_double(row.analytic_se) << ',' << (row.mc_se ? format_double(*row.mc_se) : "") << ','
        << (row.mc_std_err ? format_double(*row.mc_std_err) : "") << ',' << row.iterations << ','
        << (row.wall_time_s ? format_double(*row.wall_time_s) : "") << ',' << row.seed << '\n';
}

std::vector<CsvRow> run_experiment(const ScenarioConfig &config, std::ostream &out, const RunOptions &run)
{
    config.validate();
    const bool convergence = config.sweep == SweepParameter::convergence;
    std::vector<double> points = config.sweep_values;
    if (config.sweep == SweepParameter::none || convergence)
        points = {0.0};

    const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(run.threads), points.size()));
    const unsigned inner = outer > 1 ? 1u : run.threads;

    std::vector<std::vector<CsvRow>> rows(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    parallel_for(points.size(), outer, [&](std::size_t p) {
        try
        {
            const ScenarioConfig point = apply_sweep(config, points[p]);
            PgamOptions options = point.optimizer;
            options.seed = point.seed;
            options.threads = inner;
            for (const auto &spec : point.scenarios)
            {
                const auto start = std::chrono::steady_clock::now();
                const System system = build_system(point, spec.direct_link);
                SchemeResult result = run_scheme(system, spec, options);

                if (convergence)
                {
                    for (const auto &trace : result.traces)
                        for (std::size_t it = 0; it < trace.objectives.size(); ++it)
                        {
                            CsvRow row;
                            row.sweep_value = static_cast<double>(it);
                            row.label = spec.label + "/start" + std::to_string(trace.start_index);
                            row.analytic_se = trace.objectives[it];
                            row.iterations = trace.iterations();
                            row.seed = point.seed;
                            rows[p].push_back(row);
                        }
                    continue;
                }

                CsvRow row;
                row.sweep_value = points[p];
                row.label = spec.label;
                row.analytic_se = result.sum_se;
                row.iterations = result.iterations;
                row.seed = point.seed;
                if (point.mc_enabled)
                {
                    const std::vector<StarConfig> evaluated =
                        result.draws.empty() ? std::vector<StarConfig>{result.config} : result.draws;
                    double se = 0.0;
                    double var = 0.0;
                    for (const auto &cfg : evaluated)
                    {
                        const auto est = mc_sinr(system, cfg, point.mc_trials, derive_seed(point.seed, mc_stream), inner);
                        se += est.sum_se_hat;
                        var += est.sum_se_std_err * est.sum_se_std_err;
                    }
                    const auto count = static_cast<double>(evaluated.size());
                    row.mc_se = se / count;
                    row.mc_std_err = std::sqrt(var) / count;
                }
                if (run.record_time)
                    row.wall_time_s =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                rows[p].push_back(row);
            }
        }
        catch (...)
        {
            errors[p] = std::current_exception();
        }
    });

    std::vector<CsvRow> all;
    write_csv_header(out);
    for (std::size_t p = 0; p < points.size(); ++p)
    {
        if (errors[p])
        {
            out.flush();
            std::rethrow_exception(errors[p]);
        }
        for (const auto &row : rows[p])
        {
            write_csv_row(out, config.sweep, row);
            all.push_back(row);
        }
    }
    out.flush();
    return all;
}

} // namespace starris

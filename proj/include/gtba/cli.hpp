// SPDX-License-Identifier: Apache-2.0
//
// gtba - group-testing beam alignment simulator
// Copyright (C) 2026 The gtba authors
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

#ifndef GTBA_CLI_HPP
#define GTBA_CLI_HPP

#include "config.hpp"
#include "montecarlo.hpp"
#include "report.hpp"
#include "version.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace gtba::cli
{

struct RunOptions
{
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::size_t workers = 1;
    bool trace = false;
};

inline constexpr std::array<std::string_view, 3> figure_ids{"fig-duration-m2", "fig-duration-m4", "fig-threshold"};

inline constexpr std::size_t default_reproduce_trials = 20000;

// Threshold grid for the energy-detection figure, in dBm (15 points).
inline std::vector<double> threshold_grid_db()
{
    std::vector<double> grid;
    for (int k = 0; k < 15; ++k)
        grid.push_back(-140.0 + 6.0 * k);
    return grid;
}

// Canonical run for one of the reproducible figures; nullopt for an unknown id.
inline std::optional<RunConfig> figure_config(std::string_view id, std::size_t trials = default_reproduce_trials)
{
    RunConfig rc;
    rc.algorithms = {Algorithm::agtba, Algorithm::hgtba1, Algorithm::hgtba2, Algorithm::hgtba3, Algorithm::hes};
    rc.out_dir = "out/" + std::string(id);
    ExperimentConfig &ex = rc.experiment;
    ex.algorithm = rc.algorithms.front();
    ex.n_trials = trials;
    ex.seed = 1;
    if (id == "fig-duration-m2" || id == "fig-duration-m4")
    {
        ex.m_paths = id == "fig-duration-m2" ? 2 : 4;
        ex.n_intervals = 8;
        ex.oracle = NoiselessOracle{};
        ex.sweep = SweepSpec{SweepParam::n_intervals, {8, 16, 32, 64, 128}};
        return rc;
    }
    if (id == "fig-threshold")
    {
        ex.m_paths = 2;
        ex.n_intervals = 64;
        ex.oracle = EnergyOracle{};
        ex.sweep = SweepSpec{SweepParam::threshold_db, threshold_grid_db()};
        return rc;
    }
    return std::nullopt;
}

namespace detail
{

inline std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// key=value lines: config snapshot flattened as config.<section>.<key>.
inline std::string config_snapshot(const RunConfig &rc)
{
    std::ostringstream os;
    std::istringstream in(to_ini(rc));
    std::string section;
    for (std::string line; std::getline(in, line);)
    {
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find(" = ");
        os << "config." << section << '.' << line.substr(0, eq) << '=' << line.substr(eq + 3) << '\n';
    }
    return os.str();
}

} // namespace detail

// Runs every (algorithm, sweep point) of a config and writes results.csv, the manifest and,
// when requested, one trace file per row (trial 0 of that row).
inline int execute(RunConfig rc, const RunOptions &opt, const std::string &source, std::ostream &log,
                   std::ostream &err)
{
    namespace fs = std::filesystem;
    try
    {
        if (opt.out_dir)
            rc.out_dir = *opt.out_dir;
        if (opt.seed)
            rc.experiment.seed = *opt.seed;
        if (opt.trials)
            rc.experiment.n_trials = *opt.trials;
        rc.experiment.validate();

        const std::string started = detail::utc_now();
        const fs::path out_dir(rc.out_dir);
        fs::create_directories(out_dir);

        std::ostringstream csv;
        csv << results_csv_header << '\n';
        std::vector<fs::path> traces;
        const ExperimentConfig &base = rc.experiment;
        std::vector<std::optional<double>> points;
        if (base.sweep)
            points.assign(base.sweep->values.begin(), base.sweep->values.end());
        else
            points.push_back(std::nullopt);
        const std::optional<SweepParam> param =
            base.sweep ? std::optional<SweepParam>(base.sweep->param) : std::nullopt;

        for (Algorithm a : rc.algorithms)
            for (std::size_t k = 0; k < points.size(); ++k)
            {
                ExperimentConfig point = points[k] ? at_sweep_point(base, *points[k]) : base;
                point.sweep.reset();
                point.algorithm = a;
                const MetricsSummary m = run_experiment(point, opt.workers);
                csv << results_csv_row(point, param, points[k], m) << '\n';
                log << to_string(a) << (points[k] ? " " + std::string(to_string(*param)) + "=" + shortest(*points[k]) : "")
                    << ": E[T_BA]=" << fixed6(m.mean_duration) << " detected=" << fixed6(m.mean_detected_paths)
                    << " outage=" << fixed6(m.outage_probability) << '\n';

                if (opt.trace)
                {
                    const TrialRun run = run_trial(point, 0, true);
                    std::ostringstream tr;
                    write_trace_csv(tr, run.outcome);
                    fs::path p = out_dir / ("trace_" + std::string(to_string(a)) +
                                            (points.size() > 1 ? "_" + std::to_string(k) : "") + ".csv");
                    write_file_atomic(p, tr.str());
                    traces.push_back(p);
                }
            }

        const fs::path results = out_dir / "results.csv";
        write_file_atomic(results, csv.str());

        std::ostringstream manifest;
        manifest << "tool=gtba\nversion=" << version << "\nsource=" << source << "\nstarted_utc=" << started
                 << "\nfinished_utc=" << detail::utc_now() << "\nworkers=" << opt.workers
                 << "\nresults=" << results.string() << '\n';
        for (std::size_t k = 0; k < traces.size(); ++k)
            manifest << "trace." << k << '=' << traces[k].string() << '\n';
        manifest << detail::config_snapshot(rc);
        try
        {
            write_file_atomic(out_dir / "manifest", manifest.str());
        }
        catch (...)
        {
            std::error_code ec;
            fs::remove(results, ec);
            throw;
        }
        log << "wrote " << results.string() << '\n';
        return 0;
    }
    catch (const ConfigError &e)
    {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

inline int cmd_run(const std::string &config_path, const RunOptions &opt, std::ostream &log = std::cout,
                   std::ostream &err = std::cerr)
{
    RunConfig rc;
    try
    {
        rc = load_config(config_path);
    }
    catch (const ConfigError &e)
    {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return execute(std::move(rc), opt, config_path, log, err);
}

inline int cmd_reproduce(std::string_view figure_id, const RunOptions &opt, std::ostream &log = std::cout,
                         std::ostream &err = std::cerr)
{
    auto rc = figure_config(figure_id);
    if (!rc)
    {
        err << "error: unknown figure id '" << figure_id << "' (expected fig-duration-m2, fig-duration-m4, "
            << "fig-threshold)\n";
        return 2;
    }
    return execute(std::move(*rc), opt, "reproduce:" + std::string(figure_id), log, err);
}

// Exact noiseless E[T_BA] by enumerating every placement; prints CSV to `out`.
inline int cmd_enumerate(std::size_t n, std::size_t m, const std::vector<Algorithm> &algorithms,
                         std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
    try
    {
        out << "algorithm,N,M,placements,mean_duration\n";
        for (Algorithm a : algorithms)
        {
            const double mean = enumerate_exact(n, m, a);
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.0f", binomial(n, m));
            out << to_string(a) << ',' << n << ',' << m << ',' << buf << ',' << fixed6(mean) << '\n';
        }
        return 0;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace gtba::cli

#endif

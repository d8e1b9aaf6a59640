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

#include <gtba/cli.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char **argv)
{
    CLI::App app{"gtba: group-testing beam alignment simulator"};
    app.set_version_flag("--version", std::string(gtba::version));
    app.require_subcommand(1);

    gtba::cli::RunOptions opt;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--trace", opt.trace, "write per-slot trace of trial 0 for every row");
    };

    std::string config_path;
    CLI::App *run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment config (INI)")->required();
    add_common(run);

    std::string figure;
    CLI::App *reproduce = app.add_subcommand("reproduce", "run a canonical figure sweep");
    reproduce->add_option("figure", figure, "fig-duration-m2 | fig-duration-m4 | fig-threshold")->required();
    reproduce->add_option("--trials", trials, "trials per point (default 20000)");
    add_common(reproduce);

    std::size_t n = 0, m = 0;
    std::vector<std::string> names;
    CLI::App *enumerate = app.add_subcommand("enumerate", "exact noiseless mean duration over all placements");
    enumerate->add_option("-N,--intervals", n, "number of intervals")->required();
    enumerate->add_option("-M,--paths", m, "number of paths")->required();
    enumerate->add_option("--algorithm", names, "algorithms (default: all)")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    for (CLI::App *sub : {run, reproduce})
    {
        if (sub->count("--out"))
            opt.out_dir = out_dir;
        if (sub->count("--seed"))
            opt.seed = seed;
    }
    if (reproduce->count("--trials"))
        opt.trials = trials;

    if (*run)
        return gtba::cli::cmd_run(config_path, opt);
    if (*reproduce)
        return gtba::cli::cmd_reproduce(figure, opt);

    std::vector<gtba::Algorithm> algorithms;
    for (const auto &s : names)
    {
        auto a = gtba::parse_algorithm(s);
        if (!a)
        {
            std::cerr << "error: unknown algorithm '" << s << "'\n";
            return 2;
        }
        algorithms.push_back(*a);
    }
    if (algorithms.empty())
        algorithms.assign(gtba::all_algorithms.begin(), gtba::all_algorithms.end());
    return gtba::cli::cmd_enumerate(n, m, algorithms);
}

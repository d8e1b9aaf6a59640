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

// Acceptance suite: one PASS/FAIL line per exit criterion. Exit status is nonzero if any fails.

#include <gtba/cli.hpp>
#include <gtba/gtba.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace gtba;
namespace fs = std::filesystem;

namespace
{

// Pinned tolerances.
constexpr std::size_t kTrials = 20000;
constexpr std::size_t kThresholdTrials = 10000;
constexpr double kRatioM2Lo = 1.7, kRatioM2Hi = 2.3;
constexpr double kRatioM4Lo = 2.5, kRatioM4Hi = 3.5;
constexpr double kHesGap = 4.0;
constexpr double kNearZeroDetected = 0.1; // "within 10% of 0", read as an absolute 0.1 paths
constexpr double kHighThresholdOutage = 0.95;
constexpr double kEnumerationSeconds = 60.0;
constexpr double kSpeedupSeconds = 30.0;
constexpr std::size_t kWorkers = 1;

struct Verdict
{
    bool pass;
    std::string detail;
};

std::string fmt(const char *f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig noiseless(std::size_t n, std::size_t m, Algorithm a)
{
    ExperimentConfig c;
    c.n_intervals = n;
    c.m_paths = m;
    c.algorithm = a;
    c.n_trials = kTrials;
    c.seed = 1;
    return c;
}

Verdict correctness_by_enumeration()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t runs = 0;
    for (std::size_t n = 4; n <= 16; ++n)
        for (std::size_t m = 1; m <= 3; ++m)
        {
            const AngularCodebook cb(n);
            for_each_placement(n, m,
                               [&](const std::vector<IntervalIndex> &p)
                               {
                                   const GroundTruth t = GroundTruth::at_intervals(cb, p);
                                   for (Algorithm a : all_algorithms)
                                       for (bool ex : {true, false})
                                       {
                                           Oracle o(NoiselessOracle{}, cb, t, Rng(0));
                                           SearchOptions opt;
                                           opt.exact_count = ex;
                                           opt.record_trace = false;
                                           if (run_algorithm(a, IntervalSet::all(cb), m, o, opt).declared_intervals !=
                                               IntervalSet(p))
                                               throw std::runtime_error(std::string(to_string(a)) + " misdeclares N=" +
                                                                        std::to_string(n) + " M=" + std::to_string(m));
                                           ++runs;
                                       }
                               });
        }
    const double s = seconds_since(t0);
    return {s < kEnumerationSeconds, std::to_string(runs) + " runs exact, " + fmt("%.2f s", s)};
}

Verdict bisection_optimality()
{
    std::size_t checked = 0;
    for (std::size_t n = 2; n <= 256; n *= 2)
    {
        const AngularCodebook cb(n);
        const std::size_t log2n = static_cast<std::size_t>(std::lround(std::log2(static_cast<double>(n))));
        for (IntervalIndex p = 0; p < n; ++p)
        {
            const GroundTruth t = GroundTruth::at_intervals(cb, {p});
            Oracle o(NoiselessOracle{}, cb, t, Rng(0));
            SearchOptions opt;
            opt.exact_count = true; // a present single path is known to exist
            const BAOutcome out = agtba(IntervalSet::all(cb), 1, o, opt);
            if (out.duration_slots != log2n || out.declared_intervals != IntervalSet{p})
                return {false, "N=" + std::to_string(n) + " path " + std::to_string(p) + " took " +
                                   std::to_string(out.duration_slots)};
            ++checked;
        }
    }
    return {true, std::to_string(checked) + " (N, position) cases equal log2 N"};
}

Verdict speedup(std::size_t m, double lo, double hi, double *hes_ratio = nullptr)
{
    const auto t0 = std::chrono::steady_clock::now();
    const MetricsSummary a = run_experiment(noiseless(128, m, Algorithm::agtba), kWorkers);
    const MetricsSummary h = run_experiment(noiseless(128, m, Algorithm::hgtba3), kWorkers);
    const double s = seconds_since(t0);
    const double ratio = a.mean_duration / h.mean_duration;
    if (hes_ratio)
    {
        const MetricsSummary e = run_experiment(noiseless(128, m, Algorithm::hes), kWorkers);
        *hes_ratio = e.mean_duration / h.mean_duration;
    }
    return {ratio >= lo && ratio <= hi && s < kSpeedupSeconds,
            "E[T] agtba " + fmt("%.4f", a.mean_duration) + " / hgtba3 " + fmt("%.4f", h.mean_duration) + " = " +
                fmt("%.4f", ratio) + " (need [" + fmt("%.1f", lo) + ", " + fmt("%.1f", hi) + "]), " + fmt("%.2f s", s)};
}

Verdict ordering_by_enumeration()
{
    const double h3 = enumerate_exact(64, 2, Algorithm::hgtba3);
    std::string detail = "hgtba3 " + fmt("%.4f", h3);
    bool ok = true;
    for (Algorithm a : {Algorithm::hgtba2, Algorithm::hgtba1, Algorithm::hes, Algorithm::agtba})
    {
        const double v = enumerate_exact(64, 2, a);
        ok = ok && h3 <= v;
        detail += std::string(", ") + std::string(to_string(a)) + " " + fmt("%.4f", v);
    }
    return {ok, detail};
}

Verdict bernoulli_zero_is_noiseless()
{
    std::size_t compared = 0;
    for (Algorithm a : all_algorithms)
        for (std::size_t m : {1, 2, 4})
        {
            ExperimentConfig clean = noiseless(64, m, a);
            clean.n_trials = 2000;
            ExperimentConfig zero = clean;
            zero.oracle = BernoulliOracle{0.0, 0.0};
            const auto x = run_trials(clean, kWorkers), y = run_trials(zero, kWorkers);
            for (std::size_t t = 0; t < x.size(); ++t)
                if (x[t].duration != y[t].duration || x[t].detected != y[t].detected)
                    return {false, std::string(to_string(a)) + " differs at trial " + std::to_string(t)};
            for (std::uint64_t t = 0; t < 50; ++t)
                if (run_trial(clean, t, true).outcome != run_trial(zero, t, true).outcome)
                    return {false, std::string(to_string(a)) + " trace differs at trial " + std::to_string(t)};
            const MetricsSummary s = summarize(x, m), u = summarize(y, m);
            if (s.mean_duration != u.mean_duration || s.mean_detected_paths != u.mean_detected_paths ||
                s.outage_probability != u.outage_probability || s.ci_halfwidth_duration != u.ci_halfwidth_duration)
                return {false, "metrics differ"};
            compared += x.size();
        }
    return {true, std::to_string(compared) + " trials and their metrics identical"};
}

Verdict bernoulli_ordering()
{
    bool ok = true;
    std::string detail;
    for (std::size_t n : {16, 64})
    {
        auto run = [&](Algorithm a)
        {
            ExperimentConfig c = noiseless(n, 2, a);
            c.oracle = BernoulliOracle{0.19, 0.19};
            return run_experiment(c, kWorkers);
        };
        const MetricsSummary h = run(Algorithm::hgtba3);
        detail += (detail.empty() ? "" : "; ") + std::string("N=") + std::to_string(n) + " hgtba3 " +
                  fmt("%.3f", h.mean_duration) + "+-" + fmt("%.3f", *h.ci_halfwidth_duration);
        for (Algorithm a : {Algorithm::agtba, Algorithm::hgtba1, Algorithm::hgtba2, Algorithm::es, Algorithm::hes})
        {
            const MetricsSummary o = run(a);
            const bool good = h.mean_duration <= o.mean_duration + *h.ci_halfwidth_duration;
            ok = ok && good;
            detail += std::string(" ") + std::string(to_string(a)) + " " + fmt("%.3f", o.mean_duration) +
                      (good ? "" : "(!)");
        }
    }
    return {ok, detail};
}

Verdict threshold_shape()
{
    ExperimentConfig c = noiseless(64, 2, Algorithm::hgtba3);
    c.n_trials = kThresholdTrials;
    c.oracle = EnergyOracle{};
    const std::vector<double> grid = cli::threshold_grid_db();
    const auto pts = threshold_sweep(c, grid, kWorkers);
    std::size_t best = 0;
    for (std::size_t k = 1; k < pts.size(); ++k)
        if (pts[k].metrics.mean_detected_paths > pts[best].metrics.mean_detected_paths)
            best = k;
    const double lo = pts.front().metrics.mean_detected_paths, hi = pts.back().metrics.mean_detected_paths;
    const double outage = pts.back().metrics.outage_probability;
    const bool ok = grid.size() == 15 && lo <= kNearZeroDetected && hi <= kNearZeroDetected && best > 0 &&
                    best + 1 < pts.size() && outage >= kHighThresholdOutage;
    return {ok, "detected " + fmt("%.4f", lo) + " @" + fmt("%g", grid.front()) + " dBm, max " +
                    fmt("%.4f", pts[best].metrics.mean_detected_paths) + " @" + fmt("%g", grid[best]) + " dBm, " +
                    fmt("%.4f", hi) + " @" + fmt("%g", grid.back()) + " dBm; outage " + fmt("%.4f", outage)};
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Verdict reproducibility()
{
    const fs::path dir = fs::temp_directory_path() / ("gtba_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "run.ini";
    std::ofstream(cfg) << "[experiment]\nalgorithm = agtba, hgtba1, hgtba2, hgtba3, es, hes\noracle = bernoulli\n"
                          "n_intervals = 64\nm_paths = 2\nn_trials = 3000\nseed = 11\n\n[oracle]\np_md = 0.19\n"
                          "p_fa = 0.19\n\n[sweep]\nparam = N\nvalues = 8, 32, 64\n";
    const fs::path ecfg = dir / "energy.ini";
    std::ofstream(ecfg) << "[experiment]\nalgorithm = hgtba3\noracle = energy\nn_intervals = 64\nm_paths = 2\n"
                           "n_trials = 1000\nseed = 11\n\n[sweep]\nparam = threshold_db\nvalues = -120, -100, -80\n";

    std::ostringstream log, err;
    bool ok = true;
    std::size_t bytes = 0;
    for (const fs::path &c : {cfg, ecfg})
    {
        std::vector<std::string> csv;
        for (std::size_t workers : {1, 1, 4})
        {
            cli::RunOptions opt;
            opt.out_dir = (dir / ("out" + std::to_string(csv.size()))).string();
            opt.workers = workers;
            if (cli::cmd_run(c.string(), opt, log, err) != 0)
                return {false, "cmd_run failed: " + err.str()};
            if (!fs::exists(fs::path(*opt.out_dir) / "manifest"))
                return {false, "results written without a manifest"};
            csv.push_back(slurp(fs::path(*opt.out_dir) / "results.csv"));
        }
        ok = ok && csv[0] == csv[1] && csv[0] == csv[2];
        bytes += csv[0].size();
    }
    fs::remove_all(dir);
    return {ok, "two configs, repeated runs and --workers 1 vs 4 byte-identical (" + std::to_string(bytes) + " bytes)"};
}

} // namespace

int main()
{
    double hes_ratio = 0.0;
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"1 noiseless correctness by enumeration (N 4..16, M 1..3)", correctness_by_enumeration},
        {"2 single-path AGTBA duration equals log2 N (N <= 256)", bisection_optimality},
        {"3 AGTBA/HGTBA3 speedup, N=128 M=2", [] { return speedup(2, kRatioM2Lo, kRatioM2Hi); }},
        {"4 AGTBA/HGTBA3 speedup, N=128 M=4", [] { return speedup(4, kRatioM4Lo, kRatioM4Hi); }},
        {"5 HES/HGTBA3 gap, N=128 M=2",
         [&]
         {
             speedup(2, 0, 1e9, &hes_ratio);
             return Verdict{hes_ratio >= kHesGap, "ratio " + fmt("%.4f", hes_ratio) + " (need >= 4)"};
         }},
        {"6 ordering by exact enumeration, N=64 M=2", ordering_by_enumeration},
        {"7 Bernoulli(0,0) reproduces noiseless metrics", bernoulli_zero_is_noiseless},
        {"8 HGTBA3 least duration under Bernoulli(0.19,0.19), N 16 and 64", bernoulli_ordering},
        {"9 energy threshold sweep shape, N=64 M=2", threshold_shape},
        {"10 cmd_run CSV reproducibility", reproducibility},
    };

    int failed = 0;
    for (const auto &[name, check] : criteria)
    {
        Verdict v;
        try
        {
            v = check();
        }
        catch (const std::exception &e)
        {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s  [%s] %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}

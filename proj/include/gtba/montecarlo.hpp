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

#ifndef GTBA_MONTECARLO_HPP
#define GTBA_MONTECARLO_HPP

#include "algorithms.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "oracle.hpp"
#include "rng.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

namespace gtba
{

enum class SweepParam
{
    n_intervals,
    threshold_db,
};

inline const char *to_string(SweepParam p) { return p == SweepParam::n_intervals ? "N" : "threshold_db"; }

struct SweepSpec
{
    SweepParam param = SweepParam::n_intervals;
    std::vector<double> values;
};

struct ExperimentConfig
{
    std::size_t n_intervals = 64;
    std::size_t m_paths = 2;
    Algorithm algorithm = Algorithm::hgtba3;
    OracleKind oracle = NoiselessOracle{};
    std::size_t n_trials = 20000;
    std::uint64_t seed = 1;
    // Unset: paths in distinct intervals unless the energy (5G channel) oracle is used.
    std::optional<bool> distinct_intervals;
    std::optional<SweepSpec> sweep;

    bool distinct() const
    {
        return distinct_intervals.value_or(!std::holds_alternative<EnergyOracle>(oracle));
    }

    void validate() const
    {
        if (n_intervals == 0)
            throw std::invalid_argument("Config key 'n_intervals' must be at least 1.");
        if (m_paths == 0)
            throw std::invalid_argument("Config key 'm_paths' must be at least 1.");
        if (n_trials == 0)
            throw std::invalid_argument("Config key 'n_trials' must be at least 1.");
        if (distinct() && m_paths > n_intervals)
            throw std::invalid_argument("Config key 'm_paths' exceeds 'n_intervals' with distinct_intervals set.");
        gtba::validate(oracle);
        if (sweep)
        {
            if (sweep->values.empty())
                throw std::invalid_argument("Config key 'sweep.values' must list at least one value.");
            for (std::size_t k = 1; k < sweep->values.size(); ++k)
                if (!(sweep->values[k] > sweep->values[k - 1]))
                    throw std::invalid_argument("Config key 'sweep.values' must be strictly increasing.");
            if (sweep->param == SweepParam::threshold_db && !std::holds_alternative<EnergyOracle>(oracle))
                throw std::invalid_argument("Config key 'sweep.param' = threshold_db requires oracle = energy.");
            if (sweep->param == SweepParam::n_intervals)
                for (double v : sweep->values)
                    if (!(v >= 1.0) || v != std::floor(v))
                        throw std::invalid_argument("Config key 'sweep.values' must hold positive integers for N.");
        }
    }
};

struct TrialResult
{
    std::size_t duration = 0;
    std::size_t detected = 0;
};

struct MetricsSummary
{
    double mean_duration = 0.0;
    double mean_detected_paths = 0.0;
    double mean_missed_paths = 0.0;
    double outage_probability = 0.0;
    std::optional<double> ci_halfwidth_duration; // 95 %, normal approximation; absent below 100 trials
    std::size_t n_trials = 0;
    std::size_t m_paths = 0;
};

// Paths whose interval was declared. Only an exact interval match counts.
inline std::size_t count_detected(const GroundTruth &truth, const IntervalSet &declared)
{
    std::size_t n = 0;
    for (IntervalIndex i : truth.interval_indices)
        n += declared.contains(i) ? 1 : 0;
    return n;
}

inline SearchOptions search_options_for(const ExperimentConfig &cfg, bool record_trace)
{
    SearchOptions opt;
    opt.exact_count = cfg.distinct() && is_error_free(cfg.oracle);
    opt.record_trace = record_trace;
    return opt;
}

struct TrialRun
{
    GroundTruth truth;
    BAOutcome outcome;
    std::size_t scans = 0;
};

// One realization: channel from the (seed, trial, channel) stream, oracle noise from (seed, trial, oracle).
inline TrialRun run_trial(const ExperimentConfig &cfg, std::uint64_t trial, bool record_trace = false)
{
    const AngularCodebook codebook(cfg.n_intervals);
    const ChannelConfig channel =
        std::holds_alternative<EnergyOracle>(cfg.oracle) ? std::get<EnergyOracle>(cfg.oracle).channel : ChannelConfig{};

    TrialRun run;
    Rng channel_rng = make_stream(cfg.seed, trial, StreamKind::channel);
    run.truth = draw_channel(channel, cfg.m_paths, codebook, channel_rng, cfg.distinct());

    Oracle oracle(cfg.oracle, codebook, run.truth, make_stream(cfg.seed, trial, StreamKind::oracle));
    run.outcome = run_algorithm(cfg.algorithm, IntervalSet::all(codebook), cfg.m_paths, oracle,
                                search_options_for(cfg, record_trace));
    run.scans = oracle.scan_count();
    return run;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index is handled exactly once.
inline void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)> &fn)
{
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(
            [&]
            {
                for (std::size_t i = next++; i < n; i = next++)
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                        next = n;
                    }
                }
            });
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

// Fold in trial order so the floating-point result does not depend on scheduling.
inline MetricsSummary summarize(const std::vector<TrialResult> &trials, std::size_t m_paths)
{
    MetricsSummary s;
    s.n_trials = trials.size();
    s.m_paths = m_paths;
    if (trials.empty())
        return s;
    double sum_d = 0.0, sum_det = 0.0, outages = 0.0;
    for (const TrialResult &t : trials)
    {
        sum_d += static_cast<double>(t.duration);
        sum_det += static_cast<double>(t.detected);
        outages += t.detected == 0 ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(trials.size());
    s.mean_duration = sum_d / n;
    s.mean_detected_paths = sum_det / n;
    s.mean_missed_paths = static_cast<double>(m_paths) - s.mean_detected_paths;
    s.outage_probability = outages / n;
    if (trials.size() >= 100)
    {
        double ss = 0.0;
        for (const TrialResult &t : trials)
        {
            const double d = static_cast<double>(t.duration) - s.mean_duration;
            ss += d * d;
        }
        s.ci_halfwidth_duration = 1.96 * std::sqrt(ss / (n - 1.0) / n);
    }
    return s;
}

inline std::vector<TrialResult> run_trials(const ExperimentConfig &cfg, std::size_t workers = 1)
{
    cfg.validate();
    std::vector<TrialResult> results(cfg.n_trials);
    parallel_for(cfg.n_trials, workers,
                 [&](std::size_t t)
                 {
                     const TrialRun run = run_trial(cfg, t);
                     results[t] = {run.outcome.duration_slots, count_detected(run.truth, run.outcome.declared_intervals)};
                 });
    return results;
}

// Empirical estimate of E[T_BA] (plus detection and outage) for one configuration point.
inline MetricsSummary run_experiment(const ExperimentConfig &cfg, std::size_t workers = 1)
{
    return summarize(run_trials(cfg, workers), cfg.m_paths);
}

// Configuration for one sweep value (the sweep itself is dropped from the copy).
inline ExperimentConfig at_sweep_point(const ExperimentConfig &cfg, double value)
{
    ExperimentConfig point = cfg;
    point.sweep.reset();
    if (!cfg.sweep)
        return point;
    if (cfg.sweep->param == SweepParam::n_intervals)
        point.n_intervals = static_cast<std::size_t>(value);
    else
        std::get<EnergyOracle>(point.oracle).threshold_db = value;
    return point;
}

struct SweepPoint
{
    std::optional<double> value;
    MetricsSummary metrics;
};

inline std::vector<SweepPoint> run_sweep(const ExperimentConfig &cfg, std::size_t workers = 1)
{
    cfg.validate();
    if (!cfg.sweep)
        return {{std::nullopt, run_experiment(cfg, workers)}};
    std::vector<SweepPoint> out;
    for (double v : cfg.sweep->values)
        out.push_back({v, run_experiment(at_sweep_point(cfg, v), workers)});
    return out;
}

// Energy-oracle sweep over thresholds. All points share the base seed, so every threshold sees the
// same channel realizations and the same noise samples.
inline std::vector<SweepPoint> threshold_sweep(const ExperimentConfig &cfg, const std::vector<double> &thresholds_db,
                                               std::size_t workers = 1)
{
    if (!std::holds_alternative<EnergyOracle>(cfg.oracle))
        throw std::invalid_argument("Threshold sweep requires the energy oracle.");
    ExperimentConfig swept = cfg;
    swept.sweep = SweepSpec{SweepParam::threshold_db, thresholds_db};
    return run_sweep(swept, workers);
}

inline double binomial(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0.0;
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i)
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

// Calls fn(placement) for every sorted m-subset of {0..n-1}, in lexicographic order.
inline void for_each_placement(std::size_t n, std::size_t m,
                               const std::function<void(const std::vector<IntervalIndex> &)> &fn)
{
    if (m == 0 || m > n)
        return;
    std::vector<IntervalIndex> c(m);
    for (std::size_t i = 0; i < m; ++i)
        c[i] = static_cast<IntervalIndex>(i);
    while (true)
    {
        fn(c);
        std::size_t i = m;
        while (i > 0 && c[i - 1] == n - m + (i - 1))
            --i;
        if (i == 0)
            return;
        ++c[i - 1];
        for (std::size_t j = i; j < m; ++j)
            c[j] = c[j - 1] + 1;
    }
}

inline constexpr double enumeration_budget = 1e6;

// Exact noiseless E[T_BA] over every placement of m paths into n distinct intervals.
inline double enumerate_exact(std::size_t n, std::size_t m, Algorithm algorithm)
{
    if (n == 0 || m == 0 || m > n)
        throw std::invalid_argument("Enumeration needs 1 <= m <= n.");
    if (binomial(n, m) > enumeration_budget)
        throw std::invalid_argument("C(" + std::to_string(n) + ", " + std::to_string(m) +
                                    ") placements exceed the enumeration budget of 1e6.");
    const AngularCodebook codebook(n);
    const IntervalSet pool = IntervalSet::all(codebook);
    SearchOptions opt;
    opt.exact_count = true;
    opt.record_trace = false;

    double total = 0.0;
    std::size_t count = 0;
    for_each_placement(n, m,
                       [&](const std::vector<IntervalIndex> &placement)
                       {
                           const GroundTruth truth = GroundTruth::at_intervals(codebook, placement);
                           Oracle oracle(NoiselessOracle{}, codebook, truth, Rng(0));
                           total += static_cast<double>(run_algorithm(algorithm, pool, m, oracle, opt).duration_slots);
                           ++count;
                       });
    return total / static_cast<double>(count);
}

} // namespace gtba

#endif

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

#include <gtba/montecarlo.hpp>

#include <gtest/gtest.h>

#include <limits>

using namespace gtba;

namespace
{

ExperimentConfig noiseless(std::size_t n, std::size_t m, Algorithm a, std::size_t trials)
{
    ExperimentConfig c;
    c.n_intervals = n;
    c.m_paths = m;
    c.algorithm = a;
    c.n_trials = trials;
    c.seed = 42;
    return c;
}

} // namespace

TEST(Montecarlo, SinglePathAgtbaIsDeterministic)
{
    const MetricsSummary s = run_experiment(noiseless(64, 1, Algorithm::agtba, 500));
    EXPECT_EQ(s.mean_duration, 6.0);
    EXPECT_EQ(s.outage_probability, 0.0);
    ASSERT_TRUE(s.ci_halfwidth_duration);
    EXPECT_EQ(*s.ci_halfwidth_duration, 0.0);
}

TEST(Montecarlo, NoiselessDetectsEveryPath)
{
    for (Algorithm a : all_algorithms)
    {
        const MetricsSummary s = run_experiment(noiseless(32, 3, a, 300));
        EXPECT_EQ(s.mean_detected_paths, 3.0) << to_string(a);
        EXPECT_EQ(s.mean_missed_paths, 0.0);
        EXPECT_EQ(s.outage_probability, 0.0);
    }
}

TEST(Montecarlo, EnumerationOfHybridExhaustiveAtEight)
{
    double total = 0.0;
    for_each_placement(8, 2, [&](const std::vector<IntervalIndex> &p) { total += (p[1] + 2) / 2; });
    EXPECT_DOUBLE_EQ(enumerate_exact(8, 2, Algorithm::hes), total / 28.0);
}

TEST(Montecarlo, EnumerationExamples)
{
    EXPECT_EQ(enumerate_exact(2, 1, Algorithm::agtba), 1.0);
    // Exhaustive branch over the four placements: the missing path at 0, 1, 2, 3 costs 1, 2, 3, 3 slots.
    EXPECT_DOUBLE_EQ(enumerate_exact(4, 3, Algorithm::agtba), 9.0 / 4.0);
    // Regression constant; every placement is cross-checked against the reference trace in test_algorithms.
    EXPECT_DOUBLE_EQ(enumerate_exact(8, 2, Algorithm::hgtba3) * 28.0, 86.0);
    EXPECT_THROW(enumerate_exact(3, 4, Algorithm::agtba), std::invalid_argument);
    EXPECT_THROW(enumerate_exact(128, 4, Algorithm::agtba), std::invalid_argument);
}

TEST(Montecarlo, PlacementEnumeration)
{
    std::size_t count = 0;
    std::vector<IntervalIndex> prev;
    for_each_placement(10, 3,
                       [&](const std::vector<IntervalIndex> &p)
                       {
                           ASSERT_TRUE(p[0] < p[1] && p[1] < p[2]);
                           if (!prev.empty())
                           {
                               ASSERT_LT(prev, p);
                           }
                           prev = p;
                           ++count;
                       });
    EXPECT_EQ(count, 120u);
    EXPECT_EQ(binomial(10, 3), 120.0);
}

TEST(Montecarlo, SamplingAgreesWithEnumeration)
{
    for (Algorithm a : {Algorithm::agtba, Algorithm::hgtba3})
    {
        const MetricsSummary s = run_experiment(noiseless(8, 2, a, 100000));
        ASSERT_TRUE(s.ci_halfwidth_duration);
        EXPECT_LE(std::abs(s.mean_duration - enumerate_exact(8, 2, a)), 3.0 * *s.ci_halfwidth_duration)
            << to_string(a);
    }
}

TEST(Montecarlo, Reproducible)
{
    ExperimentConfig c = noiseless(64, 2, Algorithm::hgtba3, 2000);
    c.oracle = BernoulliOracle{0.1, 0.05};
    const auto a = run_trials(c, 1);
    const auto b = run_trials(c, 1);
    const auto w = run_trials(c, 4);
    for (std::size_t t = 0; t < a.size(); ++t)
    {
        ASSERT_EQ(a[t].duration, b[t].duration);
        ASSERT_EQ(a[t].duration, w[t].duration);
        ASSERT_EQ(a[t].detected, w[t].detected);
    }
    const MetricsSummary s1 = run_experiment(c, 1), s3 = run_experiment(c, 3);
    EXPECT_EQ(s1.mean_duration, s3.mean_duration);
    EXPECT_EQ(s1.mean_detected_paths, s3.mean_detected_paths);
    EXPECT_EQ(s1.ci_halfwidth_duration, s3.ci_halfwidth_duration);
}

TEST(Montecarlo, SeedChangesTheDraws)
{
    ExperimentConfig c = noiseless(64, 2, Algorithm::agtba, 400);
    const double a = run_experiment(c).mean_duration;
    c.seed = 43;
    EXPECT_NE(a, run_experiment(c).mean_duration);
}

TEST(Montecarlo, ConfidenceInterval)
{
    std::vector<TrialResult> t(100);
    for (std::size_t k = 0; k < t.size(); ++k)
        t[k] = {k % 2 ? 3u : 1u, 1u};
    const MetricsSummary s = summarize(t, 2);
    EXPECT_DOUBLE_EQ(s.mean_duration, 2.0);
    ASSERT_TRUE(s.ci_halfwidth_duration);
    EXPECT_NEAR(*s.ci_halfwidth_duration, 1.96 * std::sqrt(100.0 / 99.0) / 10.0, 1e-12);
    EXPECT_DOUBLE_EQ(s.mean_missed_paths, 1.0);

    t.resize(99);
    EXPECT_FALSE(summarize(t, 2).ci_halfwidth_duration);
}

TEST(Montecarlo, OutageCountsTrialsWithNoDetection)
{
    const std::vector<TrialResult> t{{4, 0}, {4, 1}, {4, 2}, {4, 0}};
    EXPECT_DOUBLE_EQ(summarize(t, 2).outage_probability, 0.5);
}

TEST(Montecarlo, DetectionCreditsExactIntervalOnly)
{
    const AngularCodebook cb(16);
    const GroundTruth co = GroundTruth::at_intervals(cb, {4, 4});
    EXPECT_EQ(count_detected(co, IntervalSet{4}), 2u);
    EXPECT_EQ(count_detected(co, IntervalSet{3, 5}), 0u);
}

TEST(Montecarlo, ThresholdLimits)
{
    ExperimentConfig c = noiseless(64, 2, Algorithm::hgtba3, 2000);
    c.oracle = EnergyOracle{};
    const auto pts = threshold_sweep(c, {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()});
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_LT(pts[0].metrics.mean_detected_paths, 0.2);
    EXPECT_EQ(pts[1].metrics.mean_detected_paths, 0.0);
    EXPECT_EQ(pts[1].metrics.outage_probability, 1.0);
}

TEST(Montecarlo, PairedSweepAllNackIsMonotone)
{
    ExperimentConfig c = noiseless(64, 2, Algorithm::agtba, 1);
    const AngularCodebook cb(64);
    const IntervalSet beams[] = {IntervalSet::all(cb), IntervalSet::range(0, 16), IntervalSet{7}};
    double prev = -1.0;
    for (double thr = -150.0; thr <= -40.0; thr += 10.0)
    {
        std::size_t nacks = 0, scans = 0;
        for (std::uint64_t t = 0; t < 2000; ++t)
        {
            Rng crng = make_stream(c.seed, t, StreamKind::channel);
            const GroundTruth truth = draw_channel(ChannelConfig{}, 2, cb, crng);
            Oracle o(EnergyOracle{thr, {}}, cb, truth, make_stream(c.seed, t, StreamKind::oracle));
            for (const IntervalSet &b : beams)
            {
                nacks += o.scan(b) == ScanResult::nack;
                ++scans;
            }
        }
        const double rate = static_cast<double>(nacks) / static_cast<double>(scans);
        EXPECT_GE(rate, prev) << thr;
        prev = rate;
    }
}

TEST(Montecarlo, SweepPointsAndValidation)
{
    ExperimentConfig c = noiseless(8, 2, Algorithm::agtba, 50);
    c.sweep = SweepSpec{SweepParam::n_intervals, {4, 8, 16}};
    const auto pts = run_sweep(c);
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_EQ(*pts[2].value, 16.0);
    EXPECT_EQ(at_sweep_point(c, 16).n_intervals, 16u);
    EXPECT_FALSE(pts[0].metrics.ci_halfwidth_duration);

    c.sweep = SweepSpec{SweepParam::threshold_db, {-90}};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.sweep = SweepSpec{SweepParam::n_intervals, {8, 4}};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.sweep.reset();
    c.m_paths = 9;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Montecarlo, ParallelForPropagatesErrors)
{
    EXPECT_THROW(parallel_for(10, 3,
                              [](std::size_t k)
                              {
                                  if (k == 7)
                                      throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

TEST(Montecarlo, DistinctDefaultsByOracle)
{
    ExperimentConfig c;
    EXPECT_TRUE(c.distinct());
    c.oracle = EnergyOracle{};
    EXPECT_FALSE(c.distinct());
    c.distinct_intervals = true;
    EXPECT_TRUE(c.distinct());
}

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

#ifndef GTBA_CHANNEL_HPP
#define GTBA_CHANNEL_HPP

#include "codebook.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtba
{

// Log-distance path loss: PL_dB = intercept + slope * log10(d) + N(0, shadow_sigma^2)
struct PathLossModel
{
    double intercept_db;
    double slope_db_per_decade;
    double shadow_sigma_db;
};

// Single-cell uplink at 28 GHz. Every field can be overridden from the experiment config.
struct ChannelConfig
{
    double carrier_freq_hz = 28e9;
    double bandwidth_hz = 57.6e6;
    std::size_t n_rx_antennas = 64;
    double tx_power_dbm = 20.0;
    double noise_psd_dbm_per_hz = -174.0;
    double bs_height_m = 10.0;
    double ue_height_m = 2.0;
    double radius_min_m = 10.0;
    double radius_max_m = 200.0;
    double los_decay_per_m = 0.0149;
    PathLossModel pathloss_los{61.4, 20.0, 5.8};
    PathLossModel pathloss_nlos{72.0, 29.2, 8.7};

    void validate() const
    {
        auto finite = [](double v, const char *key)
        {
            if (!std::isfinite(v))
                throw std::invalid_argument(std::string("Channel parameter '") + key + "' must be finite.");
        };
        finite(carrier_freq_hz, "carrier_freq");
        finite(bandwidth_hz, "bandwidth");
        finite(tx_power_dbm, "tx_power_dbm");
        finite(noise_psd_dbm_per_hz, "noise_psd_dbm_per_hz");
        finite(bs_height_m, "bs_height_m");
        finite(ue_height_m, "ue_height_m");
        finite(radius_min_m, "radius_min_m");
        finite(radius_max_m, "radius_max_m");
        finite(los_decay_per_m, "los_decay_per_m");
        for (const auto *pl : {&pathloss_los, &pathloss_nlos})
        {
            finite(pl->intercept_db, "pathloss intercept");
            finite(pl->slope_db_per_decade, "pathloss slope");
            finite(pl->shadow_sigma_db, "pathloss shadow sigma");
            if (pl->shadow_sigma_db < 0.0)
                throw std::invalid_argument("Shadowing standard deviation cannot be negative.");
        }
        if (n_rx_antennas == 0)
            throw std::invalid_argument("Channel parameter 'n_rx_antennas' must be at least 1.");
        if (bandwidth_hz <= 0.0)
            throw std::invalid_argument("Channel parameter 'bandwidth' must be positive.");
        if (radius_min_m <= 0.0 || !(radius_min_m < radius_max_m))
            throw std::invalid_argument("Channel parameters require 0 < radius_min_m < radius_max_m.");
        if (los_decay_per_m < 0.0)
            throw std::invalid_argument("Channel parameter 'los_decay_per_m' cannot be negative.");
    }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double tx_power_mw(const ChannelConfig &cfg) { return db_to_linear(cfg.tx_power_dbm); }

inline double noise_power_mw(const ChannelConfig &cfg)
{
    return db_to_linear(cfg.noise_psd_dbm_per_hz) * cfg.bandwidth_hz;
}

// Realized channel: M paths with their AoAs, complex gains and interval indices.
struct GroundTruth
{
    std::vector<double> aoas;
    std::vector<std::complex<double>> gains;
    std::vector<IntervalIndex> interval_indices;
    double distance_m = 0.0;

    std::size_t n_paths() const noexcept { return aoas.size(); }

    bool any_path_in(const IntervalSet &beam) const
    {
        for (IntervalIndex i : interval_indices)
            if (beam.contains(i))
                return true;
        return false;
    }

    // Distinct intervals holding at least one path.
    IntervalSet occupied() const
    {
        IntervalSet s;
        for (IntervalIndex i : interval_indices)
            s.insert(i);
        return s;
    }

    void validate(const AngularCodebook &codebook) const
    {
        if (aoas.empty() || aoas.size() != gains.size() || aoas.size() != interval_indices.size())
            throw std::invalid_argument("Ground truth needs M >= 1 paths with matching AoA, gain and interval lists.");
        for (std::size_t m = 0; m < aoas.size(); ++m)
            if (codebook.interval_of(aoas[m]) != interval_indices[m])
                throw std::invalid_argument("Ground truth interval index disagrees with its AoA.");
    }

    // Paths placed at interval centres with unit gain; enough for the noiseless and Bernoulli oracles.
    static GroundTruth at_intervals(const AngularCodebook &codebook, const std::vector<IntervalIndex> &intervals)
    {
        GroundTruth t;
        for (IntervalIndex i : intervals)
        {
            if (i >= codebook.size())
                throw std::invalid_argument("Path interval " + std::to_string(i) + " is outside the codebook.");
            t.aoas.push_back((static_cast<double>(i) + 0.5) * codebook.beamwidth());
            t.gains.emplace_back(1.0, 0.0);
            t.interval_indices.push_back(i);
        }
        return t;
    }
};

// Area-uniform UE distance on the ring [radius_min, radius_max].
inline double draw_distance(const ChannelConfig &cfg, Rng &rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r0 = cfg.radius_min_m * cfg.radius_min_m;
    const double r1 = cfg.radius_max_m * cfg.radius_max_m;
    return std::sqrt(r0 + u(rng) * (r1 - r0));
}

struct PathDraw
{
    std::complex<double> gain;
    bool los;
    double pathloss_db;
};

// Path loss uses the 3D BS-UE separation; the LOS probability uses the ground distance.
inline PathDraw draw_path_gain(const ChannelConfig &cfg, double ground_distance_m, Rng &rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double dh = cfg.bs_height_m - cfg.ue_height_m;
    const double d3 = std::sqrt(ground_distance_m * ground_distance_m + dh * dh);

    PathDraw out{};
    out.los = u(rng) < std::exp(-cfg.los_decay_per_m * ground_distance_m);
    const PathLossModel &pl = out.los ? cfg.pathloss_los : cfg.pathloss_nlos;
    out.pathloss_db = pl.intercept_db + pl.slope_db_per_decade * std::log10(d3) + pl.shadow_sigma_db * gauss(rng);

    // Unit-mean-power circular Gaussian small-scale fading.
    const double re = gauss(rng) * std::sqrt(0.5);
    const double im = gauss(rng) * std::sqrt(0.5);
    out.gain = std::pow(10.0, -out.pathloss_db / 20.0) * std::complex<double>(re, im);
    return out;
}

// One static channel realization. With distinct_intervals, AoAs are re-drawn until every path
// falls in its own interval (uniform placement of M paths into N intervals without replacement).
inline GroundTruth draw_channel(const ChannelConfig &cfg, std::size_t m_paths, const AngularCodebook &codebook,
                                Rng &rng, bool distinct_intervals = false)
{
    if (m_paths == 0)
        throw std::invalid_argument("Number of paths must be at least 1.");
    if (distinct_intervals && m_paths > codebook.size())
        throw std::invalid_argument("Cannot place " + std::to_string(m_paths) + " paths into " +
                                    std::to_string(codebook.size()) + " distinct intervals.");

    std::uniform_real_distribution<double> angle(0.0, two_pi);
    GroundTruth t;
    t.distance_m = draw_distance(cfg, rng);
    for (std::size_t m = 0; m < m_paths; ++m)
    {
        double psi = 0.0;
        IntervalIndex idx = 0;
        do
        {
            psi = angle(rng);
            idx = codebook.interval_of(psi);
        } while (distinct_intervals &&
                 std::find(t.interval_indices.begin(), t.interval_indices.end(), idx) != t.interval_indices.end());

        t.aoas.push_back(psi);
        t.interval_indices.push_back(idx);
        t.gains.push_back(draw_path_gain(cfg, t.distance_m, rng).gain);
    }
    return t;
}

// Sectored-antenna count for a beam of |beam| intervals: smallest N_a with 2*pi/N_a <= beam width,
// clamped to [1, N_RX]. Integer form of ceil(2*pi / (|beam| * w)) = ceil(N / |beam|).
inline std::size_t active_antennas(std::size_t beam_size, const AngularCodebook &codebook, std::size_t n_rx)
{
    if (beam_size == 0)
        throw std::invalid_argument("Scanning beam cannot be empty.");
    const std::size_t n = codebook.size();
    std::size_t na = (n + beam_size - 1) / beam_size;
    return std::clamp<std::size_t>(na, 1, n_rx);
}

struct BeamEnergy
{
    double p_rx_mw;
    std::size_t n_active;
};

// Received energy of one scan: y = sqrt(P_TX) * sum_{paths in beam} sqrt(N_a) h_m + w.
inline BeamEnergy beamform_energy(const GroundTruth &truth, const IntervalSet &beam, const AngularCodebook &codebook,
                                  const ChannelConfig &cfg, Rng &rng)
{
    if (beam.empty())
        throw std::invalid_argument("Scanning beam cannot be empty.");

    const std::size_t na = active_antennas(beam.size(), codebook, cfg.n_rx_antennas);
    std::complex<double> signal{0.0, 0.0};
    for (std::size_t m = 0; m < truth.n_paths(); ++m)
        if (beam.contains(truth.interval_indices[m]))
            signal += truth.gains[m];

    const double amp = std::sqrt(tx_power_mw(cfg) * static_cast<double>(na));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double noise_sd = std::sqrt(noise_power_mw(cfg) / 2.0);
    const std::complex<double> w(noise_sd * gauss(rng), noise_sd * gauss(rng));

    const std::complex<double> y = amp * signal + w;
    return {std::norm(y), na};
}

} // namespace gtba

#endif

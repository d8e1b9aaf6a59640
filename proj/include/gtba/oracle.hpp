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

#ifndef GTBA_ORACLE_HPP
#define GTBA_ORACLE_HPP

#include "channel.hpp"
#include "codebook.hpp"
#include "rng.hpp"

#include <cmath>
#include <concepts>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

namespace gtba
{

enum class ScanResult : unsigned char
{
    nack = 0,
    ack = 1,
};

inline const char *to_string(ScanResult r) { return r == ScanResult::ack ? "ACK" : "NACK"; }

struct NoiselessOracle
{
};

// Independent per-scan verdict flips: a true ACK is lost with p_md, a true NACK turns into an ACK with p_fa.
struct BernoulliOracle
{
    double p_md = 0.0;
    double p_fa = 0.0;
};

// Energy detection on the simulated channel: ACK iff P_RX / N_a >= threshold.
// The threshold is in dBm, compared against P_RX / N_a in mW.
struct EnergyOracle
{
    double threshold_db = 0.0;
    ChannelConfig channel{};
};

using OracleKind = std::variant<NoiselessOracle, BernoulliOracle, EnergyOracle>;

inline const char *oracle_name(const OracleKind &kind)
{
    switch (kind.index())
    {
    case 0:
        return "noiseless";
    case 1:
        return "bernoulli";
    default:
        return "energy";
    }
}

inline void validate(const OracleKind &kind)
{
    if (const auto *b = std::get_if<BernoulliOracle>(&kind))
    {
        auto prob = [](double p, const char *key)
        {
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument(std::string("Oracle parameter '") + key + "' must lie in [0, 1].");
        };
        prob(b->p_md, "p_md");
        prob(b->p_fa, "p_fa");
    }
    else if (const auto *e = std::get_if<EnergyOracle>(&kind))
    {
        // +/-inf thresholds are accepted as the all-ACK / all-NACK limits; NaN is not.
        if (std::isnan(e->threshold_db))
            throw std::invalid_argument("Oracle parameter 'threshold_db' must be a number.");
        e->channel.validate();
    }
}

// True when verdicts can never be wrong, which makes counting arguments about the pool sound.
inline bool is_error_free(const OracleKind &kind)
{
    if (std::holds_alternative<NoiselessOracle>(kind))
        return true;
    if (const auto *b = std::get_if<BernoulliOracle>(&kind))
        return b->p_md == 0.0 && b->p_fa == 0.0;
    return false;
}

// Anything the search procedures can query with a scanning beam.
template <typename O>
concept BeamOracle = requires(O o, const IntervalSet &beam) {
    { o.scan(beam) } -> std::same_as<ScanResult>;
};

// Binds an oracle back-end to one channel realization and owns the per-realization noise stream.
class Oracle
{
public:
    Oracle(OracleKind kind, const AngularCodebook &codebook, const GroundTruth &truth, Rng rng)
        : kind_(std::move(kind)), codebook_(&codebook), truth_(&truth), rng_(std::move(rng))
    {
        gtba::validate(kind_);
    }

    ScanResult scan(const IntervalSet &beam)
    {
        if (beam.empty())
            throw std::invalid_argument("Scanning beam cannot be empty.");
        ++scans_;
        return std::visit([&](const auto &k) { return evaluate(k, beam); }, kind_);
    }

    std::size_t scan_count() const noexcept { return scans_; }
    const OracleKind &kind() const noexcept { return kind_; }

private:
    ScanResult evaluate(const NoiselessOracle &, const IntervalSet &beam) const
    {
        return truth_->any_path_in(beam) ? ScanResult::ack : ScanResult::nack;
    }

    ScanResult evaluate(const BernoulliOracle &b, const IntervalSet &beam)
    {
        const bool present = truth_->any_path_in(beam);
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
        if (present)
            return u < b.p_md ? ScanResult::nack : ScanResult::ack;
        return u < b.p_fa ? ScanResult::ack : ScanResult::nack;
    }

    ScanResult evaluate(const EnergyOracle &e, const IntervalSet &beam)
    {
        const BeamEnergy be = beamform_energy(*truth_, beam, *codebook_, e.channel, rng_);
        const double normalized = be.p_rx_mw / static_cast<double>(be.n_active);
        return normalized >= db_to_linear(e.threshold_db) ? ScanResult::ack : ScanResult::nack;
    }

    OracleKind kind_;
    const AngularCodebook *codebook_;
    const GroundTruth *truth_;
    Rng rng_;
    std::size_t scans_ = 0;
};

static_assert(BeamOracle<Oracle>);

} // namespace gtba

#endif

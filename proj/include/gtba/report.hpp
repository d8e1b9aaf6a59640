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

#ifndef GTBA_REPORT_HPP
#define GTBA_REPORT_HPP

#include "algorithms.hpp"
#include "montecarlo.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace gtba
{

inline constexpr const char *results_csv_header =
    "algorithm,oracle,N,M,param,param_value,trials,mean_duration,ci_duration,mean_detected,outage,seed";

inline constexpr const char *trace_csv_header = "slot,chain,beam_lo,beam_hi_list,result";

inline std::string fixed6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string shortest(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// One CSV row for a (algorithm, configuration point) pair. `point` is the already-resolved config.
inline std::string results_csv_row(const ExperimentConfig &point, const std::optional<SweepParam> &param,
                                   const std::optional<double> &value, const MetricsSummary &m)
{
    std::ostringstream os;
    os << to_string(point.algorithm) << ',' << oracle_name(point.oracle) << ',' << point.n_intervals << ','
       << point.m_paths << ',' << (param ? to_string(*param) : "none") << ',' << (value ? shortest(*value) : "")
       << ',' << m.n_trials << ',' << fixed6(m.mean_duration) << ','
       << (m.ci_halfwidth_duration ? fixed6(*m.ci_halfwidth_duration) : "") << ','
       << fixed6(m.mean_detected_paths) << ',' << fixed6(m.outage_probability) << ',' << point.seed;
    return os.str();
}

// beam_lo is the lowest index in the beam; beam_hi_list lists the beam's contiguous runs as
// `lo:hi` (inclusive) separated by ';'. Chains are numbered from 0.
inline void write_trace_csv(std::ostream &os, const BAOutcome &outcome)
{
    os << trace_csv_header << '\n';
    for (const SlotRecord &slot : outcome.trace)
        for (const ChainScan &s : slot.scans)
        {
            os << slot.slot_index << ',' << s.chain << ',' << s.beam.front() << ',';
            const auto runs = s.beam.runs();
            for (std::size_t k = 0; k < runs.size(); ++k)
                os << (k ? ";" : "") << runs[k].first << ':' << runs[k].second;
            os << ',' << to_string(s.result) << '\n';
        }
}

// Writes through a temporary file and renames, so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path &path, const std::string &contents)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out)
            throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw std::runtime_error("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

} // namespace gtba

#endif

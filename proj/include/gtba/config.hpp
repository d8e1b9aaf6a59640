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

#ifndef GTBA_CONFIG_HPP
#define GTBA_CONFIG_HPP

#include "algorithms.hpp"
#include "montecarlo.hpp"
#include "oracle.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Experiment config files: INI-style sections of `key = value` lines. Lines starting with '#' or ';'
// are comments. Every key is checked; unknown keys are rejected so typos never pass silently.
//
//   [experiment]   algorithm (required, comma list), oracle, n_intervals, m_paths, n_trials, seed,
//                  distinct_intervals
//   [oracle]       p_md, p_fa (bernoulli); threshold_db (energy)
//   [channel]      energy-oracle channel parameters, see channel_keys below
//   [sweep]        param = N | threshold_db, values = v1, v2, ...
//   [output]       dir

namespace gtba
{

class ConfigError : public std::runtime_error
{
public:
    ConfigError(const std::string &key, const std::string &what)
        : std::runtime_error("config key '" + key + "': " + what), key_(key)
    {
    }
    const std::string &key() const noexcept { return key_; }

private:
    std::string key_;
};

struct RunConfig
{
    std::vector<Algorithm> algorithms;
    ExperimentConfig experiment;
    std::string out_dir = "out";
};

namespace detail
{

inline std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

inline double parse_double(const std::string &key, const std::string &text)
{
    const std::string t = trim(text);
    if (t == "inf" || t == "+inf")
        return INFINITY;
    if (t == "-inf")
        return -INFINITY;
    try
    {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size())
            throw ConfigError(key, "expected a number, got '" + t + "'");
        return v;
    }
    catch (const std::logic_error &)
    {
        throw ConfigError(key, "expected a number, got '" + t + "'");
    }
}

inline std::uint64_t parse_uint(const std::string &key, const std::string &text)
{
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || end != t.data() + t.size() || t.empty())
        throw ConfigError(key, "expected a non-negative integer, got '" + t + "'");
    return v;
}

inline bool parse_bool(const std::string &key, const std::string &text)
{
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on")
        return true;
    if (t == "false" || t == "0" || t == "no" || t == "off")
        return false;
    throw ConfigError(key, "expected true or false, got '" + t + "'");
}

struct ChannelKey
{
    const char *name;
    double ChannelConfig::*field;
};

inline const std::vector<ChannelKey> &channel_double_keys()
{
    static const std::vector<ChannelKey> keys{
        {"carrier_freq_hz", &ChannelConfig::carrier_freq_hz},
        {"bandwidth_hz", &ChannelConfig::bandwidth_hz},
        {"tx_power_dbm", &ChannelConfig::tx_power_dbm},
        {"noise_psd_dbm_per_hz", &ChannelConfig::noise_psd_dbm_per_hz},
        {"bs_height_m", &ChannelConfig::bs_height_m},
        {"ue_height_m", &ChannelConfig::ue_height_m},
        {"radius_min_m", &ChannelConfig::radius_min_m},
        {"radius_max_m", &ChannelConfig::radius_max_m},
        {"los_decay_per_m", &ChannelConfig::los_decay_per_m},
    };
    return keys;
}

struct PathLossKey
{
    const char *name;
    PathLossModel ChannelConfig::*model;
    double PathLossModel::*field;
};

inline const std::vector<PathLossKey> &pathloss_keys()
{
    static const std::vector<PathLossKey> keys{
        {"los_intercept_db", &ChannelConfig::pathloss_los, &PathLossModel::intercept_db},
        {"los_slope_db", &ChannelConfig::pathloss_los, &PathLossModel::slope_db_per_decade},
        {"los_shadow_sigma_db", &ChannelConfig::pathloss_los, &PathLossModel::shadow_sigma_db},
        {"nlos_intercept_db", &ChannelConfig::pathloss_nlos, &PathLossModel::intercept_db},
        {"nlos_slope_db", &ChannelConfig::pathloss_nlos, &PathLossModel::slope_db_per_decade},
        {"nlos_shadow_sigma_db", &ChannelConfig::pathloss_nlos, &PathLossModel::shadow_sigma_db},
    };
    return keys;
}

inline std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace detail

inline RunConfig parse_config(std::istream &in)
{
    namespace pt = boost::property_tree;

    // Drop '#' comments (whole-line or trailing) before handing the text to the INI reader.
    std::stringstream cleaned;
    for (std::string line; std::getline(in, line);)
        cleaned << detail::trim(line.substr(0, line.find('#'))) << '\n';

    pt::ptree tree;
    try
    {
        pt::read_ini(cleaned, tree);
    }
    catch (const pt::ini_parser_error &e)
    {
        throw ConfigError("<file>", std::string("malformed config: ") + e.message());
    }

    static const std::set<std::string> known{
        "experiment.algorithm",    "experiment.oracle", "experiment.n_intervals", "experiment.m_paths",
        "experiment.n_trials",     "experiment.seed",   "experiment.distinct_intervals",
        "oracle.p_md",             "oracle.p_fa",       "oracle.threshold_db",
        "sweep.param",             "sweep.values",      "output.dir",
    };
    for (const auto &[section, body] : tree)
    {
        if (!body.data().empty())
            throw ConfigError(section, "keys must live inside a [section]");
        for (const auto &[key, value] : body)
        {
            const std::string full = section + "." + key;
            bool ok = known.count(full) > 0;
            if (section == "channel")
            {
                for (const auto &k : detail::channel_double_keys())
                    ok = ok || key == k.name;
                for (const auto &k : detail::pathloss_keys())
                    ok = ok || key == k.name;
                ok = ok || key == "n_rx_antennas";
            }
            if (!ok)
                throw ConfigError(full, "unknown key");
        }
    }

    auto get = [&](const std::string &key) -> std::optional<std::string>
    {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '.')))
            return detail::trim(*v);
        return std::nullopt;
    };
    auto require = [&](const std::string &key)
    {
        auto v = get(key);
        if (!v || v->empty())
            throw ConfigError(key, "missing required key");
        return *v;
    };

    RunConfig rc;
    ExperimentConfig &ex = rc.experiment;

    for (const std::string &name : detail::split_list(require("experiment.algorithm")))
    {
        auto a = parse_algorithm(name);
        if (!a)
            throw ConfigError("experiment.algorithm",
                              "unknown algorithm '" + name + "' (expected agtba, hgtba1, hgtba2, hgtba3, es, hes)");
        rc.algorithms.push_back(*a);
    }
    if (rc.algorithms.empty())
        throw ConfigError("experiment.algorithm", "missing required key");
    ex.algorithm = rc.algorithms.front();

    ex.n_intervals = detail::parse_uint("experiment.n_intervals", require("experiment.n_intervals"));
    ex.m_paths = detail::parse_uint("experiment.m_paths", require("experiment.m_paths"));
    if (auto v = get("experiment.n_trials"))
        ex.n_trials = detail::parse_uint("experiment.n_trials", *v);
    if (auto v = get("experiment.seed"))
        ex.seed = detail::parse_uint("experiment.seed", *v);
    if (auto v = get("experiment.distinct_intervals"))
        ex.distinct_intervals = detail::parse_bool("experiment.distinct_intervals", *v);
    if (auto v = get("output.dir"))
        rc.out_dir = *v;

    std::optional<SweepSpec> sweep;
    if (auto p = get("sweep.param"))
    {
        SweepSpec s;
        if (*p == "N")
            s.param = SweepParam::n_intervals;
        else if (*p == "threshold_db")
            s.param = SweepParam::threshold_db;
        else
            throw ConfigError("sweep.param", "expected N or threshold_db, got '" + *p + "'");
        for (const std::string &item : detail::split_list(require("sweep.values")))
            s.values.push_back(detail::parse_double("sweep.values", item));
        sweep = std::move(s);
    }
    else if (get("sweep.values"))
        throw ConfigError("sweep.param", "missing required key (sweep.values is set)");
    ex.sweep = sweep;

    const std::string oracle = get("experiment.oracle").value_or("noiseless");
    if (oracle == "noiseless")
        ex.oracle = NoiselessOracle{};
    else if (oracle == "bernoulli")
        ex.oracle = BernoulliOracle{detail::parse_double("oracle.p_md", require("oracle.p_md")),
                                    detail::parse_double("oracle.p_fa", require("oracle.p_fa"))};
    else if (oracle == "energy")
    {
        EnergyOracle e;
        const bool swept = sweep && sweep->param == SweepParam::threshold_db;
        if (auto v = get("oracle.threshold_db"))
            e.threshold_db = detail::parse_double("oracle.threshold_db", *v);
        else if (!swept)
            throw ConfigError("oracle.threshold_db", "missing required key");
        for (const auto &k : detail::channel_double_keys())
            if (auto v = get(std::string("channel.") + k.name))
                e.channel.*k.field = detail::parse_double(std::string("channel.") + k.name, *v);
        for (const auto &k : detail::pathloss_keys())
            if (auto v = get(std::string("channel.") + k.name))
                (e.channel.*k.model).*k.field = detail::parse_double(std::string("channel.") + k.name, *v);
        if (auto v = get("channel.n_rx_antennas"))
            e.channel.n_rx_antennas = detail::parse_uint("channel.n_rx_antennas", *v);
        ex.oracle = e;
    }
    else
        throw ConfigError("experiment.oracle", "expected noiseless, bernoulli or energy, got '" + oracle + "'");

    for (const auto &[section, body] : tree)
        if (section == "channel" && !std::holds_alternative<EnergyOracle>(ex.oracle))
            throw ConfigError("channel", "channel parameters are only used by oracle = energy");

    try
    {
        ex.validate();
    }
    catch (const std::invalid_argument &e)
    {
        // Validation messages already name the offending key.
        throw ConfigError("experiment", e.what());
    }
    return rc;
}

inline RunConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("<file>", "cannot open config file '" + path + "'");
    return parse_config(in);
}

// Canonical text form of a config; parse_config(to_ini(rc)) reproduces rc.
inline std::string to_ini(const RunConfig &rc)
{
    const ExperimentConfig &ex = rc.experiment;
    std::ostringstream os;
    os << "[experiment]\nalgorithm = ";
    for (std::size_t k = 0; k < rc.algorithms.size(); ++k)
        os << (k ? "," : "") << to_string(rc.algorithms[k]);
    os << "\noracle = " << oracle_name(ex.oracle) << "\nn_intervals = " << ex.n_intervals
       << "\nm_paths = " << ex.m_paths << "\nn_trials = " << ex.n_trials << "\nseed = " << ex.seed
       << "\ndistinct_intervals = " << (ex.distinct() ? "true" : "false") << "\n";

    if (const auto *b = std::get_if<BernoulliOracle>(&ex.oracle))
        os << "\n[oracle]\np_md = " << detail::format_double(b->p_md)
           << "\np_fa = " << detail::format_double(b->p_fa) << "\n";
    if (const auto *e = std::get_if<EnergyOracle>(&ex.oracle))
    {
        os << "\n[oracle]\nthreshold_db = " << detail::format_double(e->threshold_db) << "\n\n[channel]\n";
        for (const auto &k : detail::channel_double_keys())
            os << k.name << " = " << detail::format_double(e->channel.*k.field) << "\n";
        for (const auto &k : detail::pathloss_keys())
            os << k.name << " = " << detail::format_double((e->channel.*k.model).*k.field) << "\n";
        os << "n_rx_antennas = " << e->channel.n_rx_antennas << "\n";
    }
    if (ex.sweep)
    {
        os << "\n[sweep]\nparam = " << to_string(ex.sweep->param) << "\nvalues = ";
        for (std::size_t k = 0; k < ex.sweep->values.size(); ++k)
            os << (k ? ", " : "") << detail::format_double(ex.sweep->values[k]);
        os << "\n";
    }
    os << "\n[output]\ndir = " << rc.out_dir << "\n";
    return os.str();
}

} // namespace gtba

#endif

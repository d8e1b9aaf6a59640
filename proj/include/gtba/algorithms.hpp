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

#ifndef GTBA_ALGORITHMS_HPP
#define GTBA_ALGORITHMS_HPP

#include "codebook.hpp"
#include "oracle.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Interactive beam-alignment procedures built on adaptive group testing.
//
// Every procedure is written against a BeamOracle and reports a BAOutcome. Procedures that use two
// RF chains run chain-local searches independently (their decisions never depend on the other
// chain within a round) and then merge the two scan logs into lockstep slots: a round costs
// max(len_1, len_2) slots and the chain that finishes first idles.

namespace gtba
{

struct ChainScan
{
    unsigned chain;
    IntervalSet beam;
    ScanResult result;

    friend bool operator==(const ChainScan &, const ChainScan &) = default;
};

struct SlotRecord
{
    std::size_t slot_index;
    std::vector<ChainScan> scans;

    friend bool operator==(const SlotRecord &, const SlotRecord &) = default;
};

struct BAOutcome
{
    IntervalSet declared_intervals;
    std::size_t duration_slots = 0;
    std::vector<SlotRecord> trace; // empty when trace recording is off

    friend bool operator==(const BAOutcome &, const BAOutcome &) = default;
};

struct SearchOptions
{
    // Pool is known to hold exactly m paths (error-free verdicts, paths in distinct intervals).
    // Enables declaring the whole residual pool once its size equals the residual path count.
    bool exact_count = false;
    // Hard cap on slots; 0 means twice the initial pool size. Exceeding it throws.
    std::size_t slot_cap = 0;
    bool record_trace = true;
};

class SlotCapExceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Scans issued by one RF chain, in order.
class ChainLog
{
public:
    explicit ChainLog(bool record = true) : record_(record) {}

    template <BeamOracle O>
    ScanResult probe(O &oracle, const IntervalSet &beam)
    {
        const ScanResult r = oracle.scan(beam);
        ++count_;
        if (record_)
            scans_.emplace_back(beam, r);
        return r;
    }

    std::size_t size() const noexcept { return count_; }
    bool recording() const noexcept { return record_; }
    const std::vector<std::pair<IntervalSet, ScanResult>> &scans() const noexcept { return scans_; }

private:
    bool record_;
    std::size_t count_ = 0;
    std::vector<std::pair<IntervalSet, ScanResult>> scans_;
};

// Group-size exponent of generalized binary splitting:
//   m == 1: floor(log2(n / 2))        (pure bisection for a single path)
//   m >= 2: floor(log2((n - m + 1) / m))
// evaluated in integers and clamped so that 1 <= 2^alpha <= n.
inline std::size_t alpha(std::size_t n, std::size_t m)
{
    if (n == 0 || m == 0)
        throw std::invalid_argument("alpha requires n >= 1 and m >= 1.");
    std::size_t a = 0;
    if (m == 1)
    {
        // largest a with 2^(a+1) <= n
        while ((std::size_t{4} << a) <= n)
            ++a;
    }
    else if (n + 1 > m)
    {
        // largest a with m * 2^a <= n - m + 1
        const std::size_t num = n - m + 1;
        while (m * (std::size_t{2} << a) <= num)
            ++a;
    }
    while (a > 0 && (std::size_t{1} << a) > n)
        --a;
    return a;
}

struct BisectionResult
{
    IntervalIndex found;
    IntervalSet nack_set;
    std::size_t scans_used;
};

// Halving search for one path inside a group already known (by an ACK) to contain one.
// Scans the lower ceil(k/2) elements; ACK keeps the scanned half, NACK keeps the complement.
template <BeamOracle O>
BisectionResult bisection_search(const IntervalSet &group, O &oracle, ChainLog &log)
{
    if (group.empty())
        throw std::invalid_argument("Bisection requires a non-empty group.");
    const std::size_t before = log.size();
    IntervalSet g = group;
    IntervalSet nacks;
    while (g.size() > 1)
    {
        IntervalSet lower = g.prefix((g.size() + 1) / 2);
        if (log.probe(oracle, lower) == ScanResult::ack)
            g = std::move(lower);
        else
        {
            g -= lower;
            nacks |= lower;
        }
    }
    return {g.front(), std::move(nacks), log.size() - before};
}

template <BeamOracle O>
BisectionResult bisection_search(const IntervalSet &group, O &oracle)
{
    ChainLog log(false);
    return bisection_search(group, oracle, log);
}

// Result of a single-chain search over a sub-pool.
struct ChainSearch
{
    IntervalSet declared;
    IntervalSet eliminated; // intervals ruled out by NACKs
};

namespace detail
{

inline std::size_t group_size(std::size_t n, std::size_t m) { return std::size_t{1} << alpha(n, m); }

inline bool exhaustive_regime(std::size_t n, std::size_t m) { return n + 2 <= 2 * m; }

} // namespace detail

// Generalized binary splitting on one chain, recursion unrolled into a loop.
template <BeamOracle O>
ChainSearch agtba_chain(IntervalSet pool, std::size_t m, O &oracle, ChainLog &log, bool exact_count)
{
    ChainSearch out;
    while (m > 0 && !pool.empty())
    {
        if (exact_count && pool.size() == m)
        {
            out.declared |= pool;
            break;
        }
        if (detail::exhaustive_regime(pool.size(), m))
        {
            const IntervalSet sweep = pool;
            for (IntervalIndex i : sweep)
            {
                if (m == 0)
                    break;
                if (exact_count && pool.size() == m)
                {
                    out.declared |= pool;
                    break;
                }
                pool.erase(i);
                if (log.probe(oracle, IntervalSet{i}) == ScanResult::ack)
                {
                    out.declared.insert(i);
                    --m;
                }
                else
                    out.eliminated.insert(i);
            }
            break;
        }

        const IntervalSet group = pool.prefix(detail::group_size(pool.size(), m));
        if (log.probe(oracle, group) == ScanResult::nack)
        {
            pool -= group;
            out.eliminated |= group;
            continue;
        }
        BisectionResult b = bisection_search(group, oracle, log);
        pool -= b.nack_set;
        pool.erase(b.found);
        out.eliminated |= b.nack_set;
        out.declared.insert(b.found);
        --m;
    }
    return out;
}

struct MagtbaResult
{
    IntervalSet nack_set;
    std::optional<IntervalIndex> found;
    unsigned p = 0;
    std::size_t scans_used = 0;
};

// Splitting pass that stops after the first path it finds. The pool is not known to hold a path;
// NACK'd groups are discarded and the search continues until an ACK is bisected or the pool runs out.
template <BeamOracle O>
MagtbaResult magtba(IntervalSet pool, std::size_t m, O &oracle, ChainLog &log)
{
    MagtbaResult out;
    const std::size_t before = log.size();
    if (m == 0)
        return out;
    while (!pool.empty())
    {
        if (detail::exhaustive_regime(pool.size(), m))
        {
            for (IntervalIndex i : pool)
            {
                if (log.probe(oracle, IntervalSet{i}) == ScanResult::ack)
                {
                    out.found = i;
                    out.p = 1;
                    break;
                }
                out.nack_set.insert(i);
            }
            break;
        }
        const IntervalSet group = pool.prefix(detail::group_size(pool.size(), m));
        if (log.probe(oracle, group) == ScanResult::nack)
        {
            pool -= group;
            out.nack_set |= group;
            continue;
        }
        BisectionResult b = bisection_search(group, oracle, log);
        out.nack_set |= b.nack_set;
        out.found = b.found;
        out.p = 1;
        break;
    }
    out.scans_used = log.size() - before;
    return out;
}

namespace detail
{

// Accumulates slots for one BA run and enforces the slot cap.
class Timeline
{
public:
    Timeline(std::size_t pool_size, const SearchOptions &opt)
        : cap_(opt.slot_cap ? opt.slot_cap : 2 * std::max<std::size_t>(pool_size, 1)), record_(opt.record_trace)
    {
    }

    bool recording() const noexcept { return record_; }

    void slot(std::vector<ChainScan> scans)
    {
        bump();
        if (record_)
            out_.trace.push_back({out_.duration_slots - 1, std::move(scans)});
    }

    // One chain active, one scan per slot.
    void serial(const ChainLog &log, unsigned chain)
    {
        if (!record_)
        {
            for (std::size_t k = 0; k < log.size(); ++k)
                bump();
            return;
        }
        for (const auto &[beam, r] : log.scans())
            slot({{chain, beam, r}});
    }

    // Two chains in lockstep; the round lasts as long as the longer log.
    void parallel(const ChainLog &a, unsigned chain_a, const ChainLog &b, unsigned chain_b)
    {
        const std::size_t len = std::max(a.size(), b.size());
        for (std::size_t k = 0; k < len; ++k)
        {
            if (!record_)
            {
                bump();
                continue;
            }
            std::vector<ChainScan> scans;
            if (k < a.size())
                scans.push_back({chain_a, a.scans()[k].first, a.scans()[k].second});
            if (k < b.size())
                scans.push_back({chain_b, b.scans()[k].first, b.scans()[k].second});
            std::sort(scans.begin(), scans.end(), [](const auto &x, const auto &y) { return x.chain < y.chain; });
            slot(std::move(scans));
        }
    }

    void declare(IntervalIndex i) { out_.declared_intervals.insert(i); }
    void declare(const IntervalSet &s) { out_.declared_intervals |= s; }

    BAOutcome finish() && { return std::move(out_); }

private:
    void bump()
    {
        if (++out_.duration_slots > cap_)
            throw SlotCapExceeded("Beam alignment exceeded the hard cap of " + std::to_string(cap_) + " slots.");
    }

    std::size_t cap_;
    bool record_;
    BAOutcome out_;
};

// Singleton sweep in ascending index order with n_rf scans per slot. Returns the number declared.
// With exact_count, the sweep stops scanning once the unscanned remainder must be all paths.
template <BeamOracle O>
std::size_t sweep(IntervalSet &pool, std::size_t m, O &oracle, Timeline &tl, unsigned n_rf, bool exact_count)
{
    std::size_t declared = 0;
    while (declared < m && !pool.empty())
    {
        if (exact_count && pool.size() == m - declared)
        {
            tl.declare(pool);
            declared = m;
            pool = {};
            break;
        }
        const IntervalSet batch = pool.prefix(std::min<std::size_t>(n_rf, pool.size()));
        std::vector<ChainScan> scans;
        for (std::size_t c = 0; c < batch.size(); ++c)
        {
            const IntervalSet beam{batch[c]};
            const ScanResult r = oracle.scan(beam);
            // Two ACKs in the final slot cannot both be kept: never declare more than m.
            if (r == ScanResult::ack && declared < m)
            {
                tl.declare(batch[c]);
                ++declared;
            }
            scans.push_back({static_cast<unsigned>(c), beam, r});
        }
        pool -= batch;
        tl.slot(std::move(scans));
    }
    return declared;
}

// Parallel bisections over ACK'd groups, one per chain.
template <BeamOracle O>
std::vector<BisectionResult> parallel_bisections(const std::vector<std::pair<unsigned, IntervalSet>> &groups,
                                                 O &oracle, Timeline &tl)
{
    std::vector<BisectionResult> results;
    std::array<ChainLog, 2> logs{ChainLog(tl.recording()), ChainLog(tl.recording())};
    std::array<unsigned, 2> chains{0, 1};
    for (std::size_t k = 0; k < groups.size(); ++k)
    {
        chains[k] = groups[k].first;
        results.push_back(bisection_search(groups[k].second, oracle, logs[k]));
    }
    if (groups.size() == 1)
        chains[1] = 1 - chains[0];
    tl.parallel(logs[0], chains[0], logs[1], chains[1]);
    return results;
}

} // namespace detail

// Analog search (one RF chain).
template <BeamOracle O>
BAOutcome agtba(const IntervalSet &pool, std::size_t m, O &oracle, const SearchOptions &opt = {})
{
    detail::Timeline tl(pool.size(), opt);
    ChainLog log(opt.record_trace);
    ChainSearch r = agtba_chain(pool, m, oracle, log, opt.exact_count);
    tl.serial(log, 0);
    tl.declare(r.declared);
    return std::move(tl).finish();
}

// Two independent splitting searches on the lower and upper halves of the pool, ceil(m/2) and
// floor(m/2) paths respectively; repeated on the residual pool until m paths are declared.
template <BeamOracle O>
BAOutcome hgtba1(IntervalSet pool, std::size_t m, O &oracle, const SearchOptions &opt = {})
{
    detail::Timeline tl(pool.size(), opt);
    while (m > 0 && !pool.empty())
    {
        if (opt.exact_count && pool.size() == m)
        {
            tl.declare(pool);
            break;
        }
        const IntervalSet lower = pool.prefix((pool.size() + 1) / 2);
        const IntervalSet upper = pool - lower;
        const std::size_t m_lower = (m + 1) / 2;
        const std::size_t m_upper = m / 2;

        ChainLog log_a(opt.record_trace), log_b(opt.record_trace);
        // Halves carry a path budget, not a known path count.
        ChainSearch a = agtba_chain(lower, m_lower, oracle, log_a, false);
        ChainSearch b;
        if (m_upper > 0 && !upper.empty())
            b = agtba_chain(upper, m_upper, oracle, log_b, false);
        tl.parallel(log_a, 0, log_b, 1);

        tl.declare(a.declared);
        tl.declare(b.declared);
        pool -= a.declared | a.eliminated | b.declared | b.eliminated;
        m -= a.declared.size() + b.declared.size();
    }
    return std::move(tl).finish();
}

namespace detail
{

struct GroupScan
{
    IntervalSet g1, g2;
    ScanResult r1 = ScanResult::nack, r2 = ScanResult::nack;
    bool has_g2() const { return !g2.empty(); }
};

// Forms two disjoint groups of 2^alpha lowest-index intervals (the second may be short or empty)
// and scans them in one slot.
template <BeamOracle O>
GroupScan scan_two_groups(const IntervalSet &pool, std::size_t m, O &oracle, Timeline &tl)
{
    GroupScan gs;
    const std::size_t k = group_size(pool.size(), m);
    gs.g1 = pool.prefix(k);
    const IntervalSet rest = pool - gs.g1;
    gs.g2 = rest.prefix(std::min(k, rest.size()));

    gs.r1 = oracle.scan(gs.g1);
    std::vector<ChainScan> scans{{0, gs.g1, gs.r1}};
    if (gs.has_g2())
    {
        gs.r2 = oracle.scan(gs.g2);
        scans.push_back({1, gs.g2, gs.r2});
    }
    tl.slot(std::move(scans));
    return gs;
}

// Bisects every ACK'd group (at most m of them) in parallel and declares what they find.
template <BeamOracle O>
std::size_t resolve_all_ack(const GroupScan &gs, IntervalSet &pool, std::size_t m, O &oracle, Timeline &tl)
{
    std::vector<std::pair<unsigned, IntervalSet>> groups{{0, gs.g1}};
    if (gs.has_g2() && m >= 2)
        groups.emplace_back(1, gs.g2);
    for (const BisectionResult &b : parallel_bisections(groups, oracle, tl))
    {
        tl.declare(b.found);
        pool -= b.nack_set;
        pool.erase(b.found);
    }
    return groups.size();
}

} // namespace detail

// Joint two-group scans; only a double ACK is followed up, a lone ACK'd group returns to the pool.
template <BeamOracle O>
BAOutcome hgtba2(IntervalSet pool, std::size_t m, O &oracle, const SearchOptions &opt = {})
{
    detail::Timeline tl(pool.size(), opt);
    while (m > 0 && !pool.empty())
    {
        if (opt.exact_count && pool.size() == m)
        {
            tl.declare(pool);
            break;
        }
        if (detail::exhaustive_regime(pool.size(), m))
        {
            detail::sweep(pool, m, oracle, tl, 2, opt.exact_count);
            break;
        }
        const detail::GroupScan gs = detail::scan_two_groups(pool, m, oracle, tl);
        const bool nack1 = gs.r1 == ScanResult::nack;
        const bool nack2 = gs.has_g2() && gs.r2 == ScanResult::nack;
        if (!nack1 && !nack2)
        {
            m -= detail::resolve_all_ack(gs, pool, m, oracle, tl);
            continue;
        }
        if (nack1)
            pool -= gs.g1;
        if (nack2)
            pool -= gs.g2;
    }
    return std::move(tl).finish();
}

// Every ACK is followed up: with one ACK and one NACK, one chain bisects the ACK'd group while the
// other runs a single splitting pass (magtba) over the intervals outside both groups.
template <BeamOracle O>
BAOutcome hgtba3(IntervalSet pool, std::size_t m, O &oracle, const SearchOptions &opt = {})
{
    detail::Timeline tl(pool.size(), opt);
    while (m > 0 && !pool.empty())
    {
        if (opt.exact_count && pool.size() == m)
        {
            tl.declare(pool);
            break;
        }
        if (detail::exhaustive_regime(pool.size(), m))
        {
            detail::sweep(pool, m, oracle, tl, 2, opt.exact_count);
            break;
        }
        const detail::GroupScan gs = detail::scan_two_groups(pool, m, oracle, tl);
        const bool ack1 = gs.r1 == ScanResult::ack;
        const bool ack2 = gs.has_g2() && gs.r2 == ScanResult::ack;

        if (!ack1 && !ack2)
        {
            pool -= gs.g1 | gs.g2;
            continue;
        }
        if (ack1 && (ack2 || !gs.has_g2()))
        {
            m -= detail::resolve_all_ack(gs, pool, m, oracle, tl);
            continue;
        }

        const unsigned ack_chain = ack1 ? 0 : 1;
        const IntervalSet &acked = ack1 ? gs.g1 : gs.g2;
        const IntervalSet &nacked = ack1 ? gs.g2 : gs.g1;

        ChainLog log_a(opt.record_trace), log_b(opt.record_trace);
        BisectionResult b = bisection_search(acked, oracle, log_a);
        MagtbaResult mg = magtba(pool - (gs.g1 | gs.g2), m - 1, oracle, log_b);
        tl.parallel(log_a, ack_chain, log_b, 1 - ack_chain);

        tl.declare(b.found);
        pool -= b.nack_set | nacked | mg.nack_set;
        pool.erase(b.found);
        if (mg.found)
        {
            tl.declare(*mg.found);
            pool.erase(*mg.found);
        }
        m -= 1 + mg.p;
    }
    return std::move(tl).finish();
}

// Plain singleton sweep in index order, n_rf intervals per slot (ES for 1 chain, HES for 2).
template <BeamOracle O>
BAOutcome exhaustive(IntervalSet pool, std::size_t m, O &oracle, unsigned n_rf, const SearchOptions &opt = {})
{
    if (n_rf != 1 && n_rf != 2)
        throw std::invalid_argument("Exhaustive search supports 1 or 2 RF chains.");
    detail::Timeline tl(pool.size(), opt);
    detail::sweep(pool, m, oracle, tl, n_rf, false);
    return std::move(tl).finish();
}

enum class Algorithm
{
    agtba,
    hgtba1,
    hgtba2,
    hgtba3,
    es,
    hes,
};

inline constexpr std::array<Algorithm, 6> all_algorithms{Algorithm::agtba, Algorithm::hgtba1, Algorithm::hgtba2,
                                                         Algorithm::hgtba3, Algorithm::es,     Algorithm::hes};

inline std::string_view to_string(Algorithm a)
{
    switch (a)
    {
    case Algorithm::agtba:
        return "agtba";
    case Algorithm::hgtba1:
        return "hgtba1";
    case Algorithm::hgtba2:
        return "hgtba2";
    case Algorithm::hgtba3:
        return "hgtba3";
    case Algorithm::es:
        return "es";
    case Algorithm::hes:
        return "hes";
    }
    return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name)
{
    for (Algorithm a : all_algorithms)
        if (to_string(a) == name)
            return a;
    return std::nullopt;
}

inline unsigned rf_chains(Algorithm a) { return (a == Algorithm::agtba || a == Algorithm::es) ? 1 : 2; }

template <BeamOracle O>
BAOutcome run_algorithm(Algorithm a, const IntervalSet &pool, std::size_t m, O &oracle,
                        const SearchOptions &opt = {})
{
    if (m == 0)
        throw std::invalid_argument("Number of paths must be at least 1.");
    switch (a)
    {
    case Algorithm::agtba:
        return agtba(pool, m, oracle, opt);
    case Algorithm::hgtba1:
        return hgtba1(pool, m, oracle, opt);
    case Algorithm::hgtba2:
        return hgtba2(pool, m, oracle, opt);
    case Algorithm::hgtba3:
        return hgtba3(pool, m, oracle, opt);
    case Algorithm::es:
        return exhaustive(pool, m, oracle, 1, opt);
    case Algorithm::hes:
        return exhaustive(pool, m, oracle, 2, opt);
    }
    throw std::invalid_argument("Unknown algorithm.");
}

} // namespace gtba

#endif

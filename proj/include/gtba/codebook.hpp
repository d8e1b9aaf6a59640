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

#ifndef GTBA_CODEBOOK_HPP
#define GTBA_CODEBOOK_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtba
{

using IntervalIndex = std::uint32_t;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// N equal-width angular intervals covering [0, 2*pi). Interval i is [i*w, (i+1)*w).
class AngularCodebook
{
public:
    explicit AngularCodebook(std::size_t n_intervals) : n_(n_intervals)
    {
        if (n_intervals == 0)
            throw std::invalid_argument("Number of angular intervals must be at least 1.");
        beamwidth_ = two_pi / static_cast<double>(n_intervals);
    }

    std::size_t size() const noexcept { return n_; }
    double beamwidth() const noexcept { return beamwidth_; }

    double lower_edge(IntervalIndex i) const { return static_cast<double>(i) * beamwidth_; }
    double upper_edge(IntervalIndex i) const
    {
        return (static_cast<std::size_t>(i) + 1 == n_) ? two_pi : static_cast<double>(i + 1) * beamwidth_;
    }

    // Half-open convention: an angle exactly on k*w belongs to interval k.
    IntervalIndex interval_of(double angle) const
    {
        // 2*pi itself is tolerated and folds onto the last interval.
        if (!(angle >= 0.0) || angle > two_pi)
            throw std::invalid_argument("Angle must lie in [0, 2*pi), got " + std::to_string(angle) + ".");
        if (two_pi - angle <= 1e-12)
            return static_cast<IntervalIndex>(n_ - 1);

        auto i = static_cast<std::size_t>(std::floor(angle / beamwidth_));
        // Floating division can land one interval too high or low right at an edge.
        if (i >= n_)
            i = n_ - 1;
        if (i > 0 && angle < lower_edge(static_cast<IntervalIndex>(i)))
            --i;
        else if (i + 1 < n_ && angle >= lower_edge(static_cast<IntervalIndex>(i + 1)))
            ++i;
        return static_cast<IntervalIndex>(i);
    }

private:
    std::size_t n_;
    double beamwidth_;
};

inline AngularCodebook build_codebook(std::size_t n_intervals) { return AngularCodebook(n_intervals); }

// Sorted, duplicate-free set of interval indices. Used both for candidate pools and scanning beams.
class IntervalSet
{
public:
    using const_iterator = std::vector<IntervalIndex>::const_iterator;

    IntervalSet() = default;

    IntervalSet(std::initializer_list<IntervalIndex> indices) : idx_(indices) { normalize(); }

    explicit IntervalSet(std::vector<IntervalIndex> indices) : idx_(std::move(indices)) { normalize(); }

    // {first, first+1, ..., first+count-1}
    static IntervalSet range(IntervalIndex first, std::size_t count)
    {
        IntervalSet s;
        s.idx_.resize(count);
        for (std::size_t k = 0; k < count; ++k)
            s.idx_[k] = first + static_cast<IntervalIndex>(k);
        return s;
    }

    static IntervalSet all(const AngularCodebook &codebook) { return range(0, codebook.size()); }

    std::size_t size() const noexcept { return idx_.size(); }
    bool empty() const noexcept { return idx_.empty(); }
    const_iterator begin() const noexcept { return idx_.begin(); }
    const_iterator end() const noexcept { return idx_.end(); }
    IntervalIndex front() const { return idx_.front(); }
    IntervalIndex back() const { return idx_.back(); }
    IntervalIndex operator[](std::size_t k) const { return idx_[k]; }
    const std::vector<IntervalIndex> &indices() const noexcept { return idx_; }

    bool contains(IntervalIndex i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

    bool intersects(const IntervalSet &other) const
    {
        auto a = idx_.begin(), b = other.idx_.begin();
        while (a != idx_.end() && b != other.idx_.end())
        {
            if (*a == *b)
                return true;
            (*a < *b) ? ++a : ++b;
        }
        return false;
    }

    bool is_subset_of(const IntervalSet &other) const
    {
        return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
    }

    IntervalSet operator-(const IntervalSet &other) const
    {
        IntervalSet out;
        out.idx_.reserve(idx_.size());
        std::set_difference(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(), std::back_inserter(out.idx_));
        return out;
    }

    IntervalSet operator|(const IntervalSet &other) const
    {
        IntervalSet out;
        out.idx_.reserve(idx_.size() + other.idx_.size());
        std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(), std::back_inserter(out.idx_));
        return out;
    }

    IntervalSet &operator-=(const IntervalSet &other) { return *this = *this - other; }
    IntervalSet &operator|=(const IntervalSet &other) { return *this = *this | other; }

    void insert(IntervalIndex i)
    {
        auto it = std::lower_bound(idx_.begin(), idx_.end(), i);
        if (it == idx_.end() || *it != i)
            idx_.insert(it, i);
    }

    void erase(IntervalIndex i)
    {
        auto it = std::lower_bound(idx_.begin(), idx_.end(), i);
        if (it != idx_.end() && *it == i)
            idx_.erase(it);
    }

    // Lowest-index k elements.
    IntervalSet prefix(std::size_t k) const
    {
        if (k > idx_.size())
            throw std::invalid_argument("Cannot take " + std::to_string(k) + " intervals from a pool of " +
                                        std::to_string(idx_.size()) + ".");
        IntervalSet out;
        out.idx_.assign(idx_.begin(), idx_.begin() + static_cast<std::ptrdiff_t>(k));
        return out;
    }

    // True when the set forms one contiguous arc of the N-interval circle (wrap-around allowed).
    bool is_contiguous(std::size_t n_intervals) const
    {
        if (idx_.size() <= 1 || idx_.size() == n_intervals)
            return true;
        std::size_t gaps = 0;
        for (std::size_t k = 0; k < idx_.size(); ++k)
        {
            std::size_t next = idx_[(k + 1) % idx_.size()];
            std::size_t expected = (static_cast<std::size_t>(idx_[k]) + 1) % n_intervals;
            if (next != expected)
                ++gaps;
        }
        return gaps == 1;
    }

    // Maximal runs of consecutive indices as inclusive (lo, hi) pairs, no wrap-around merging.
    std::vector<std::pair<IntervalIndex, IntervalIndex>> runs() const
    {
        std::vector<std::pair<IntervalIndex, IntervalIndex>> out;
        for (IntervalIndex i : idx_)
        {
            if (!out.empty() && out.back().second + 1 == i)
                out.back().second = i;
            else
                out.emplace_back(i, i);
        }
        return out;
    }

    friend bool operator==(const IntervalSet &, const IntervalSet &) = default;

private:
    void normalize()
    {
        std::sort(idx_.begin(), idx_.end());
        if (std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end())
            throw std::invalid_argument("Interval set contains duplicate indices.");
    }

    std::vector<IntervalIndex> idx_;
};

// Deterministic group formation: the k lowest-index intervals still in the pool.
inline IntervalSet take_prefix(const IntervalSet &pool, std::size_t k) { return pool.prefix(k); }

// Throws if any index is outside the codebook.
inline void check_within(const IntervalSet &set, const AngularCodebook &codebook)
{
    if (!set.empty() && set.back() >= codebook.size())
        throw std::invalid_argument("Interval index " + std::to_string(set.back()) + " exceeds codebook size " +
                                    std::to_string(codebook.size()) + ".");
}

} // namespace gtba

#endif

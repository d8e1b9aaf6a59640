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

#ifndef GTBA_RNG_HPP
#define GTBA_RNG_HPP

#include <cstdint>
#include <random>

namespace gtba
{

using Rng = std::mt19937_64;

// Purpose of a per-trial random stream. The channel and the oracle noise draw from separate
// streams so that changing the oracle never perturbs the channel realization.
enum class StreamKind : std::uint64_t
{
    channel = 0,
    oracle = 1,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-mode seed: a pure function of (master seed, trial, stream), so trials can run in any order.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, StreamKind kind) noexcept
{
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ trial);
    return splitmix64(h ^ (static_cast<std::uint64_t>(kind) + 0xD1B54A32D192ED03ULL));
}

inline Rng make_stream(std::uint64_t master, std::uint64_t trial, StreamKind kind)
{
    return Rng(derive_seed(master, trial, kind));
}

} // namespace gtba

#endif

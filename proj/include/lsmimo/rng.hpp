// SPDX-License-Identifier: Apache-2.0
//
// lsmimo - large-scale MIMO array covariance and interference filtering toolkit
// Copyright (C) 2025-2026 The lsmimo developers
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

#ifndef lsmimo_rng_H
#define lsmimo_rng_H

#include <armadillo>
#include <cmath>
#include <complex>
#include <cstdint>

#include "common.hpp"

// Self-contained generator (splitmix64 core, Box-Muller normals). The standard
// library distributions are implementation-defined, which would break
// bit-identical results across compilers; everything random in this library
// goes through this header.

namespace lsmimo
{

inline std::uint64_t splitmix64_next(std::uint64_t &state)
{
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Maps (base seed, stream id, element index) to an independent seed. Streams
// separate the random purposes inside one experiment (antennas, users, noise,
// ...) so adding a consumer never shifts another consumer's sequence.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index)
{
    std::uint64_t s = base;
    std::uint64_t h = splitmix64_next(s);
    s += stream;
    h ^= splitmix64_next(s);
    s += index;
    h ^= splitmix64_next(s);
    return h;
}

class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64()
    {
        return splitmix64_next(state);
    }

    // Canonical double in [0, 1), 53 random bits
    double uniform()
    {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b)
    {
        return a + (b - a) * uniform();
    }

    // Standard normal via Box-Muller; the second deviate of each pair is cached
    double normal()
    {
        if (has_spare)
        {
            has_spare = false;
            return spare;
        }
        double u = 1.0 - uniform(); // (0, 1], keeps the log finite
        double v = uniform();
        double rad = std::sqrt(-2.0 * std::log(u));
        spare = rad * std::sin(2.0 * pi * v);
        has_spare = true;
        return rad * std::cos(2.0 * pi * v);
    }

    // Circular complex Gaussian with E|z|^2 = var
    std::complex<double> cnormal(double var = 1.0)
    {
        double s = std::sqrt(0.5 * var);
        double re = s * normal();
        double im = s * normal();
        return {re, im};
    }

  private:
    std::uint64_t state;
    double spare = 0.0;
    bool has_spare = false;
};

} // namespace lsmimo

#endif

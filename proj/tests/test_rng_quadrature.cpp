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

#include <atomic>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include <lsmimo/common.hpp>
#include <lsmimo/quadrature.hpp>
#include <lsmimo/rng.hpp>

using namespace lsmimo;

TEST_CASE("splitmix64 matches the published sequence", "[rng]")
{
    std::uint64_t s = 0;
    CHECK(splitmix64_next(s) == 0xE220A8397B1DCDAFULL);
    CHECK(splitmix64_next(s) == 0x6E789E6AA1B965F4ULL);
    CHECK(splitmix64_next(s) == 0x06C45D188009454FULL);

    std::uint64_t t = 42;
    CHECK(splitmix64_next(t) == 0xBDD732262FEB6E95ULL);
}

TEST_CASE("canonical double uses the top 53 bits", "[rng]")
{
    Rng rng(42);
    CHECK(rng.uniform() == Catch::Approx(0.74156487877182331).epsilon(1e-16));
}

TEST_CASE("uniform stays in [0, 1) with sane moments", "[rng]")
{
    Rng rng(7);
    double acc = 0.0, acc2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
    {
        double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        acc += u;
        acc2 += u * u;
    }
    double mean = acc / n;
    double var = acc2 / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 5e-3);
    CHECK(std::abs(var - 1.0 / 12.0) < 5e-3);
}

TEST_CASE("normal and cnormal have the requested variance", "[rng]")
{
    Rng rng(11);
    double acc = 0.0, acc2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
    {
        double x = rng.normal();
        acc += x;
        acc2 += x * x;
    }
    CHECK(std::abs(acc / n) < 0.01);
    CHECK(std::abs(acc2 / n - 1.0) < 0.02);

    double p = 0.0;
    for (int i = 0; i < n; ++i)
        p += std::norm(rng.cnormal(4.0));
    CHECK(std::abs(p / n - 4.0) < 0.05);
}

TEST_CASE("derive_seed separates streams and indices", "[rng]")
{
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));

    // no collisions over a small grid
    std::vector<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 20; ++s)
        for (std::uint64_t i = 0; i < 20; ++i)
            seen.push_back(derive_seed(123, s, i));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("pairwise_sum agrees with sequential accumulation", "[common]")
{
    std::vector<double> v(1000);
    Rng rng(3);
    for (auto &x : v)
        x = rng.uniform(-1.0, 1.0);
    double seq = std::accumulate(v.begin(), v.end(), 0.0);
    CHECK(pairwise_sum(v) == Catch::Approx(seq).epsilon(1e-12));

    std::vector<double> empty;
    CHECK(pairwise_sum(empty) == 0.0);

    std::vector<double> one = {3.25};
    CHECK(pairwise_sum(one) == 3.25);
}

TEST_CASE("run_parallel visits every index exactly once", "[common]")
{
    const arma::uword n = 1000;
    std::vector<std::atomic<int>> hits(n);
    run_parallel(n, 4, [&](arma::uword i) { hits[i].fetch_add(1); });
    for (arma::uword i = 0; i < n; ++i)
        CHECK(hits[i].load() == 1);
}

TEST_CASE("run_parallel propagates worker exceptions", "[common]")
{
    CHECK_THROWS_AS(run_parallel(16, 4,
                                 [](arma::uword i)
                                 {
                                     if (i == 7)
                                         throw std::invalid_argument("boom");
                                 }),
                    std::invalid_argument);
}

TEST_CASE("midpoint rule converges on smooth integrands", "[quadrature]")
{
    double v = integrate_midpoint([](double x) { return std::sin(x); }, 0.0, pi, 20000);
    CHECK(v == Catch::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("adaptive quadrature hits analytic integrals", "[quadrature]")
{
    QuadratureResult q1 = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(q1.converged);
    CHECK(q1.value == Catch::Approx(1.0 / 3.0).epsilon(1e-13));

    QuadratureResult q2 = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi);
    CHECK(q2.converged);
    CHECK(q2.value == Catch::Approx(2.0).epsilon(1e-12));

    // integrable sharp peak
    QuadratureResult q3 =
        integrate_adaptive([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3) + 1e-8); }, 0.0, 1.0);
    CHECK(q3.converged);
    CHECK(q3.calls > 15);
}

TEST_CASE("adaptive quadrature reports non-convergence", "[quadrature]")
{
    // far too small a panel budget for this oscillation
    QuadratureResult q =
        integrate_adaptive([](double x) { return std::sin(500.0 * x); }, 0.0, 10.0, 1e-12, 2);
    CHECK_FALSE(q.converged);
}

TEST_CASE("adaptive quadrature rejects a reversed interval", "[quadrature]")
{
    CHECK_THROWS_AS(integrate_adaptive([](double x) { return x; }, 1.0, 0.0), std::invalid_argument);
}

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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include <lsmimo/scenario.hpp>

using namespace lsmimo;

TEST_CASE("make_ula places equispaced antennas on the x axis", "[scenario]")
{
    ArrayGeometry g = make_ula(5, 0.075, 0.15);
    REQUIRE(g.n_antennas() == 5);
    CHECK(g.kind == ArrayKind::ula);
    CHECK(g.is_linear());
    for (arma::uword m = 0; m < 5; ++m)
    {
        CHECK(g.positions(m, 0) == Catch::Approx(0.075 * double(m)).margin(1e-15));
        CHECK(g.positions(m, 1) == 0.0);
    }

    CHECK_THROWS_AS(make_ula(0, 0.075, 0.15), std::invalid_argument);
    CHECK_THROWS_AS(make_ula(4, -1.0, 0.15), std::invalid_argument);
    CHECK_THROWS_AS(make_ula(4, 0.075, 0.0), std::invalid_argument);
}

TEST_CASE("make_random_linear stays inside the aperture and is seed-reproducible", "[scenario]")
{
    const arma::uword M = 200;
    const double dbar = 0.075;
    ArrayGeometry a = make_random_linear(M, dbar, 0.15, 99);
    ArrayGeometry b = make_random_linear(M, dbar, 0.15, 99);
    ArrayGeometry c = make_random_linear(M, dbar, 0.15, 100);

    REQUIRE(a.n_antennas() == M);
    CHECK(a.is_linear());
    CHECK(arma::approx_equal(a.positions, b.positions, "absdiff", 0.0));
    CHECK_FALSE(arma::approx_equal(a.positions, c.positions, "absdiff", 1e-12));

    double aperture = double(M) * dbar;
    for (arma::uword m = 0; m < M; ++m)
    {
        CHECK(a.positions(m, 0) >= 0.0);
        CHECK(a.positions(m, 0) < aperture);
        CHECK(a.positions(m, 1) == 0.0);
    }
}

TEST_CASE("make_disk_network keeps antennas inside the disk", "[scenario]")
{
    const double L = 500.0;
    ArrayGeometry g = make_disk_network(300, L, 0.15, 5);
    CHECK_FALSE(g.is_linear());
    for (arma::uword m = 0; m < g.n_antennas(); ++m)
        CHECK(std::hypot(g.positions(m, 0), g.positions(m, 1)) <= L + 1e-12);

    // area-uniform: about a quarter of the points land within L/2
    arma::uword inside = 0;
    for (arma::uword m = 0; m < g.n_antennas(); ++m)
        if (std::hypot(g.positions(m, 0), g.positions(m, 1)) <= 0.5 * L)
            ++inside;
    CHECK(double(inside) / double(g.n_antennas()) == Catch::Approx(0.25).margin(0.08));
}

TEST_CASE("place_scatterers_ring puts every scatterer at distance r", "[scenario]")
{
    arma::rowvec::fixed<2> center = {10.0, -4.0};
    ScattererSet s = place_scatterers_ring(center, 15.0, 50, 1);
    REQUIRE(s.scatterers.n_rows == 50);
    CHECK(s.layout == ScattererLayout::ring);
    CHECK(s.ring_radius == 15.0);
    for (arma::uword p = 0; p < 50; ++p)
        CHECK(std::hypot(s.scatterers(p, 0) - 10.0, s.scatterers(p, 1) + 4.0) ==
              Catch::Approx(15.0).epsilon(1e-12));

    CHECK_THROWS_AS(place_scatterers_ring(center, 0.0, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(place_scatterers_ring(center, 1.0, 0, 1), std::invalid_argument);
}

TEST_CASE("place_scatterers_segment spreads scatterers along +x", "[scenario]")
{
    arma::rowvec::fixed<2> origin = {2.0, 3.0};
    ScattererSet s = place_scatterers_segment(origin, 6.0, 40, 9);
    REQUIRE(s.scatterers.n_rows == 40);
    CHECK(s.layout == ScattererLayout::segment);
    CHECK(s.segment_length == 6.0);
    for (arma::uword p = 0; p < 40; ++p)
    {
        CHECK(s.scatterers(p, 0) >= 2.0);
        CHECK(s.scatterers(p, 0) <= 8.0);
        CHECK(s.scatterers(p, 1) == 3.0);
    }
}

TEST_CASE("cluster validation rejects malformed sets", "[scenario]")
{
    CHECK_NOTHROW(validate_clusters(ClusterSet{{{0.2, 0.5}, {0.7, 1.1}}}));
    CHECK_THROWS_AS(validate_clusters(ClusterSet{{}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_clusters(ClusterSet{{{0.5, 0.2}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_clusters(ClusterSet{{{-0.1, 0.2}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_clusters(ClusterSet{{{0.2, 0.5}, {0.4, 0.8}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_clusters(ClusterSet{{{0.2, 4.0}}}), std::invalid_argument);
}

TEST_CASE("sample_aoa lands inside the cluster union", "[scenario]")
{
    ClusterSet cl{{{0.3, 0.6}, {1.5, 2.0}}};
    Rng rng(17);
    for (int i = 0; i < 2000; ++i)
    {
        double th = sample_aoa(cl, rng);
        bool inside = (th >= 0.3 && th <= 0.6) || (th >= 1.5 && th <= 2.0);
        REQUIRE(inside);
    }

    // widths select proportionally: second cluster is 5/3 wider
    int hi = 0;
    Rng rng2(18);
    for (int i = 0; i < 4000; ++i)
        if (sample_aoa(cl, rng2) > 1.0)
            ++hi;
    CHECK(double(hi) / 4000.0 == Catch::Approx(0.5 / 0.8).margin(0.04));

    // zero-width clusters become point atoms
    ClusterSet atoms{{{0.4, 0.4}, {1.2, 1.2}}};
    Rng rng3(19);
    for (int i = 0; i < 100; ++i)
    {
        double th = sample_aoa(atoms, rng3);
        CHECK((th == 0.4 || th == 1.2));
    }
}

TEST_CASE("hexagon membership uses the circumradius", "[scenario]")
{
    CHECK(detail::inside_hexagon(0.0, 0.0, 1.0));
    CHECK(detail::inside_hexagon(0.999, 0.0, 1.0));
    CHECK(detail::inside_hexagon(0.0, 0.5 * std::sqrt(3.0) - 1e-9, 1.0));
    CHECK_FALSE(detail::inside_hexagon(1.001, 0.0, 1.0));
    CHECK_FALSE(detail::inside_hexagon(0.0, 0.5 * std::sqrt(3.0) + 1e-9, 1.0));
    CHECK_FALSE(detail::inside_hexagon(0.9, 0.5, 1.0)); // cut corner
}

TEST_CASE("make_hex_network builds seven cells on the standard lattice", "[scenario]")
{
    const double L = 500.0;
    MultiCellScenario net = make_hex_network(L, 32, 0.15, 15.0, 20, 4);
    REQUIRE(net.cells.size() == 7);
    CHECK(net.cell_radius == L);

    // ring of six neighbours, each sqrt(3) L from the centre cell
    for (std::size_t c = 1; c < 7; ++c)
    {
        double d = std::hypot(net.cells[c].center(0) - net.cells[0].center(0),
                              net.cells[c].center(1) - net.cells[0].center(1));
        CHECK(d == Catch::Approx(std::sqrt(3.0) * L).epsilon(1e-12));
    }

    for (const auto &cell : net.cells)
    {
        REQUIRE(cell.array.n_antennas() == 32);
        CHECK(cell.array.kind == ArrayKind::multi_cell);
        for (arma::uword m = 0; m < 32; ++m)
            CHECK(detail::inside_hexagon(cell.array.positions(m, 0) - cell.center(0),
                                         cell.array.positions(m, 1) - cell.center(1), L));
        CHECK(detail::inside_hexagon(cell.user(0) - cell.center(0), cell.user(1) - cell.center(1), L));
        CHECK(cell.scatterers.scatterers.n_rows == 20);
    }

    MultiCellScenario again = make_hex_network(L, 32, 0.15, 15.0, 20, 4);
    CHECK(arma::approx_equal(net.cells[3].array.positions, again.cells[3].array.positions, "absdiff", 0.0));
}

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

#ifndef lsmimo_scenario_H
#define lsmimo_scenario_H

#include <armadillo>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace lsmimo
{

enum class ArrayKind
{
    ula,           // equi-spaced on the x-axis
    random_linear, // i.i.d. uniform on [0, M*Dbar] on the x-axis
    disk,          // i.i.d. area-uniform in a disk
    multi_cell     // scattered inside one cell of a multi-cell network
};

inline const char *to_string(ArrayKind k)
{
    switch (k)
    {
    case ArrayKind::ula:
        return "ula";
    case ArrayKind::random_linear:
        return "random_linear";
    case ArrayKind::disk:
        return "disk";
    default:
        return "multi_cell";
    }
}

// All geometries live in a common 2D frame; 1D arrays sit on the x-axis (y = 0).
struct ArrayGeometry
{
    arma::mat positions;     // M x 2, meters
    double wavelength = 0.0; // carrier wavelength, meters
    double spacing = 0.0;    // antenna spacing D, ULA only
    ArrayKind kind = ArrayKind::ula;

    arma::uword n_antennas() const
    {
        return positions.n_rows;
    }
    bool is_linear() const
    {
        return positions.n_rows > 0 && arma::all(positions.col(1) == 0.0);
    }
};

// Union of disjoint AOA intervals in [0, pi] with a uniform density on the union
struct ClusterSet
{
    std::vector<std::pair<double, double>> intervals; // radians, sorted, disjoint

    double total_width() const
    {
        double w = 0.0;
        for (const auto &iv : intervals)
            w += iv.second - iv.first;
        return w;
    }
};

inline void validate_clusters(const ClusterSet &clusters)
{
    if (clusters.intervals.empty())
        throw std::invalid_argument("cluster set is empty");
    double prev_hi = -1.0;
    for (const auto &iv : clusters.intervals)
    {
        if (!(iv.first <= iv.second))
            throw std::invalid_argument("cluster interval has negative width");
        if (iv.first < 0.0 || iv.second > pi)
            throw std::invalid_argument("cluster interval outside [0, pi]");
        if (iv.first <= prev_hi)
            throw std::invalid_argument("cluster intervals must be sorted and disjoint");
        prev_hi = iv.second;
    }
}

// Draws one AOA from the uniform density over the interval union. Zero-width
// intervals are treated as atoms with equal probability (degenerate sets).
inline double sample_aoa(const ClusterSet &clusters, Rng &rng)
{
    double w = clusters.total_width();
    if (w == 0.0)
    {
        auto q = arma::uword(rng.uniform() * double(clusters.intervals.size()));
        if (q >= clusters.intervals.size())
            q = clusters.intervals.size() - 1;
        return clusters.intervals[q].first;
    }
    double u = rng.uniform() * w;
    for (const auto &iv : clusters.intervals)
    {
        double len = iv.second - iv.first;
        if (u <= len)
            return iv.first + u;
        u -= len;
    }
    return clusters.intervals.back().second;
}

enum class ScattererLayout
{
    ring,
    segment
};

struct ScattererSet
{
    arma::rowvec::fixed<2> center;  // user position, meters
    double ring_radius = 0.0;       // r, meters (0 for segment layout)
    arma::mat scatterers;           // P x 2, meters
    ScattererLayout layout = ScattererLayout::ring;
    double segment_length = 0.0;    // segment layout only
};

struct Cell
{
    arma::rowvec::fixed<2> center;
    double radius = 0.0; // hexagon circumradius L
    ArrayGeometry array;
    arma::rowvec::fixed<2> user;
    ScattererSet scatterers;
};

struct MultiCellScenario
{
    std::vector<Cell> cells;
    double cell_radius = 0.0;
    double wavelength = 0.0;
};

// ------------------------------------------------------------------------
// Constructors. All are pure functions of (parameters, seed).
// ------------------------------------------------------------------------

inline ArrayGeometry make_ula(arma::uword M,  // number of antennas
                              double D,       // antenna spacing, meters
                              double lambda)  // carrier wavelength, meters
{
    if (M < 1)
        throw std::invalid_argument("make_ula: M must be at least 1");
    if (D <= 0.0)
        throw std::invalid_argument("make_ula: spacing must be positive");
    if (lambda <= 0.0)
        throw std::invalid_argument("make_ula: wavelength must be positive");

    ArrayGeometry g;
    g.positions.zeros(M, 2);
    for (arma::uword m = 0; m < M; ++m)
        g.positions(m, 0) = double(m) * D;
    g.wavelength = lambda;
    g.spacing = D;
    g.kind = ArrayKind::ula;
    return g;
}

inline ArrayGeometry make_random_linear(arma::uword M,     // number of antennas
                                        double Dbar,       // mean spacing, aperture = M*Dbar
                                        double lambda,     // carrier wavelength, meters
                                        std::uint64_t seed)
{
    if (M < 1)
        throw std::invalid_argument("make_random_linear: M must be at least 1");
    if (Dbar <= 0.0)
        throw std::invalid_argument("make_random_linear: mean spacing must be positive");
    if (lambda <= 0.0)
        throw std::invalid_argument("make_random_linear: wavelength must be positive");

    ArrayGeometry g;
    g.positions.zeros(M, 2);
    Rng rng(seed);
    double aperture = double(M) * Dbar;
    for (arma::uword m = 0; m < M; ++m)
        g.positions(m, 0) = rng.uniform(0.0, aperture);
    g.wavelength = lambda;
    g.kind = ArrayKind::random_linear;
    return g;
}

inline ArrayGeometry make_disk_network(arma::uword M,     // number of antennas
                                       double L,          // disk radius, meters
                                       double lambda,     // carrier wavelength, meters
                                       std::uint64_t seed)
{
    if (M < 1)
        throw std::invalid_argument("make_disk_network: M must be at least 1");
    if (L <= 0.0)
        throw std::invalid_argument("make_disk_network: radius must be positive");
    if (lambda <= 0.0)
        throw std::invalid_argument("make_disk_network: wavelength must be positive");

    ArrayGeometry g;
    g.positions.zeros(M, 2);
    Rng rng(seed);
    for (arma::uword m = 0; m < M; ++m)
    {
        double rho = L * std::sqrt(rng.uniform()); // inverse CDF, area-uniform
        double phi = rng.uniform(0.0, 2.0 * pi);
        g.positions(m, 0) = rho * std::cos(phi);
        g.positions(m, 1) = rho * std::sin(phi);
    }
    g.wavelength = lambda;
    g.kind = ArrayKind::disk;
    return g;
}

inline ScattererSet place_scatterers_ring(const arma::rowvec::fixed<2> &center, // user position
                                          double r,                             // ring radius, meters
                                          arma::uword P,                        // number of scatterers
                                          std::uint64_t seed)
{
    if (r <= 0.0)
        throw std::invalid_argument("place_scatterers_ring: radius must be positive");
    if (P < 1)
        throw std::invalid_argument("place_scatterers_ring: P must be at least 1");

    ScattererSet s;
    s.center = center;
    s.ring_radius = r;
    s.layout = ScattererLayout::ring;
    s.scatterers.zeros(P, 2);
    Rng rng(seed);
    for (arma::uword p = 0; p < P; ++p)
    {
        double psi = rng.uniform(0.0, 2.0 * pi);
        s.scatterers(p, 0) = center(0) + r * std::cos(psi);
        s.scatterers(p, 1) = center(1) + r * std::sin(psi);
    }
    return s;
}

// Scatterers uniform on a segment of length Lseg extending from origin along +x
inline ScattererSet place_scatterers_segment(const arma::rowvec::fixed<2> &origin,
                                             double Lseg,   // segment length, meters
                                             arma::uword P, // number of scatterers
                                             std::uint64_t seed)
{
    if (Lseg <= 0.0)
        throw std::invalid_argument("place_scatterers_segment: length must be positive");
    if (P < 1)
        throw std::invalid_argument("place_scatterers_segment: P must be at least 1");

    ScattererSet s;
    s.center = origin;
    s.ring_radius = 0.0;
    s.layout = ScattererLayout::segment;
    s.segment_length = Lseg;
    s.scatterers.zeros(P, 2);
    Rng rng(seed);
    for (arma::uword p = 0; p < P; ++p)
    {
        s.scatterers(p, 0) = origin(0) + rng.uniform(0.0, Lseg);
        s.scatterers(p, 1) = origin(1);
    }
    return s;
}

namespace detail
{

// Flat-topped hexagon with circumradius L centered at the origin
inline bool inside_hexagon(double x, double y, double L)
{
    double ax = std::abs(x), ay = std::abs(y);
    return ax <= L && ay <= 0.5 * std::sqrt(3.0) * L && ay <= std::sqrt(3.0) * (L - ax) + 1e-12 * L;
}

inline arma::rowvec::fixed<2> sample_in_hexagon(const arma::rowvec::fixed<2> &center, double L, Rng &rng)
{
    for (;;)
    {
        double x = rng.uniform(-L, L);
        double y = rng.uniform(-0.5 * std::sqrt(3.0) * L, 0.5 * std::sqrt(3.0) * L);
        if (inside_hexagon(x, y, L))
            return {center(0) + x, center(1) + y};
    }
}

} // namespace detail

// 7-cell hexagonal network: one center cell and 6 neighbors. L is the hexagon
// circumradius, so neighboring cell centers sit at distance sqrt(3)*L. Each cell
// holds M_per_cell antennas and one user, both uniform over the cell area, and a
// ring of P scatterers around the user.
inline MultiCellScenario make_hex_network(double L,               // cell circumradius, meters
                                          arma::uword M_per_cell, // antennas per cell
                                          double lambda,          // carrier wavelength, meters
                                          double r,               // scatterer ring radius, meters
                                          arma::uword P,          // scatterers per user
                                          std::uint64_t seed)
{
    if (L <= 0.0 || lambda <= 0.0 || r <= 0.0)
        throw std::invalid_argument("make_hex_network: L, lambda and r must be positive");
    if (M_per_cell < 1 || P < 1)
        throw std::invalid_argument("make_hex_network: M_per_cell and P must be at least 1");

    const double s3 = std::sqrt(3.0);
    const double cx[7] = {0.0, 0.0, 0.0, 1.5 * L, 1.5 * L, -1.5 * L, -1.5 * L};
    const double cy[7] = {0.0, s3 * L, -s3 * L, 0.5 * s3 * L, -0.5 * s3 * L, 0.5 * s3 * L, -0.5 * s3 * L};

    MultiCellScenario net;
    net.cell_radius = L;
    net.wavelength = lambda;
    net.cells.resize(7);

    for (arma::uword c = 0; c < 7; ++c)
    {
        Cell &cell = net.cells[c];
        cell.center = {cx[c], cy[c]};
        cell.radius = L;

        Rng rng_ant(derive_seed(seed, 1, c));
        cell.array.positions.zeros(M_per_cell, 2);
        for (arma::uword m = 0; m < M_per_cell; ++m)
        {
            auto p = detail::sample_in_hexagon(cell.center, L, rng_ant);
            cell.array.positions(m, 0) = p(0);
            cell.array.positions(m, 1) = p(1);
        }
        cell.array.wavelength = lambda;
        cell.array.kind = ArrayKind::multi_cell;

        Rng rng_user(derive_seed(seed, 2, c));
        cell.user = detail::sample_in_hexagon(cell.center, L, rng_user);
        cell.scatterers = place_scatterers_ring(cell.user, r, P, derive_seed(seed, 3, c));
    }
    return net;
}

} // namespace lsmimo

#endif

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

#ifndef lsmimo_channel_H
#define lsmimo_channel_H

#include <armadillo>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "scenario.hpp"

namespace lsmimo
{

struct PathLossModel
{
    double alpha = 1.0;  // amplitude constant
    double gamma = 2.0;  // path-loss exponent
    bool enabled = false;
};

// Per-path power alpha/(d+r)^gamma, where d is the scatterer-to-antenna distance
// and r the user-to-scatterer hop; 1 when the model is disabled.
inline double path_loss(double d, double r, const PathLossModel &loss)
{
    if (d < 0.0)
        throw std::invalid_argument("path_loss: distance must be non-negative");
    if (d + r <= 0.0)
        throw std::invalid_argument("path_loss: d + r must be positive");
    if (!loss.enabled)
        return 1.0;
    if (loss.alpha <= 0.0 || loss.gamma <= 0.0)
        throw std::invalid_argument("path_loss: alpha and gamma must be positive");
    return loss.alpha / std::pow(d + r, loss.gamma);
}

struct ChannelRealization
{
    arma::cx_vec h;        // length M
    arma::cx_mat per_path; // P x M, row p holds the path-p component; h = sum of rows / sqrt(P)
    arma::vec aoas;        // drawn AOAs (plane-wave models only)
    arma::uword user = 0;
    std::uint64_t seed = 0;
};

inline arma::cx_vec steering_vector_ula(const ArrayGeometry &geom, double theta)
{
    if (geom.kind != ArrayKind::ula)
        throw std::invalid_argument("steering_vector_ula: geometry is not a ULA");

    arma::uword M = geom.n_antennas();
    arma::cx_vec a(M);
    double k = 2.0 * pi * geom.spacing * std::cos(theta) / geom.wavelength;
    for (arma::uword m = 0; m < M; ++m)
        a(m) = std::polar(1.0, -k * double(m));
    return a;
}

// Plane-wave response of an arbitrary 1D geometry (positions on the x-axis)
inline arma::cx_vec steering_vector_positions(const ArrayGeometry &geom, double theta)
{
    if (!geom.is_linear())
        throw std::invalid_argument("steering_vector_positions: geometry must be 1D");

    arma::uword M = geom.n_antennas();
    arma::cx_vec a(M);
    double k = 2.0 * pi * std::cos(theta) / geom.wavelength;
    for (arma::uword m = 0; m < M; ++m)
        a(m) = std::polar(1.0, -k * geom.positions(m, 0));
    return a;
}

// Multipath plane-wave channel: h = sqrt(beta/P) * sum_p a(theta_p) e^{j phi_p},
// AOAs uniform on the cluster union. fixed_phases pins phi (testing hook); an
// empty vector means randomize.
inline ChannelRealization draw_multipath_channel(const ArrayGeometry &geom, const ClusterSet &clusters,
                                                 arma::uword P, double beta, std::uint64_t seed,
                                                 const arma::vec &fixed_phases = arma::vec())
{
    validate_clusters(clusters);
    if (P < 1)
        throw std::invalid_argument("draw_multipath_channel: P must be at least 1");
    if (beta <= 0.0)
        throw std::invalid_argument("draw_multipath_channel: beta must be positive");
    if (!fixed_phases.is_empty() && fixed_phases.n_elem != P)
        throw std::invalid_argument("draw_multipath_channel: fixed phase count must match P");

    arma::uword M = geom.n_antennas();
    ChannelRealization rel;
    rel.seed = seed;
    rel.per_path.zeros(P, M);
    rel.aoas.zeros(P);

    Rng rng(seed);
    double amp = std::sqrt(beta);
    for (arma::uword p = 0; p < P; ++p)
    {
        double theta = sample_aoa(clusters, rng);
        double phi = fixed_phases.is_empty() ? rng.uniform(0.0, 2.0 * pi) : fixed_phases(p);
        rel.aoas(p) = theta;
        arma::cx_vec a = steering_vector_positions(geom, theta);
        rel.per_path.row(p) = amp * std::polar(1.0, phi) * a.st();
    }
    rel.h = arma::sum(rel.per_path, 0).st() / std::sqrt(double(P));
    return rel;
}

// One-ring / segment scattering channel. Path p, antenna m:
//   sqrt(beta_pm) e^{-j 2 pi (d_pm + r) / lambda} e^{j phi_p},
// d_pm the scatterer-to-antenna distance, beta_pm = path_loss(d_pm, r, loss).
// h = sum of paths / sqrt(P). fixed_phases as in draw_multipath_channel.
inline ChannelRealization draw_one_ring_channel(const ArrayGeometry &geom, const ScattererSet &scat,
                                                const PathLossModel &loss, std::uint64_t seed,
                                                const arma::vec &fixed_phases = arma::vec())
{
    arma::uword M = geom.n_antennas();
    arma::uword P = scat.scatterers.n_rows;
    if (M < 1 || P < 1)
        throw std::invalid_argument("draw_one_ring_channel: empty geometry or scatterer set");
    if (!fixed_phases.is_empty() && fixed_phases.n_elem != P)
        throw std::invalid_argument("draw_one_ring_channel: fixed phase count must match P");

    ChannelRealization rel;
    rel.seed = seed;
    rel.per_path.zeros(P, M);

    Rng rng(seed);
    double r = scat.ring_radius;
    double wave_k = 2.0 * pi / geom.wavelength;
    for (arma::uword p = 0; p < P; ++p)
    {
        double phi = fixed_phases.is_empty() ? rng.uniform(0.0, 2.0 * pi) : fixed_phases(p);
        std::complex<double> common = std::polar(1.0, phi);
        double sx = scat.scatterers(p, 0);
        double sy = scat.scatterers(p, 1);
        for (arma::uword m = 0; m < M; ++m)
        {
            double d = std::hypot(geom.positions(m, 0) - sx, geom.positions(m, 1) - sy);
            if (d == 0.0 && loss.enabled && loss.gamma > 0.0)
                throw std::invalid_argument("draw_one_ring_channel: degenerate geometry, antenna coincides with a scatterer");
            double beta = path_loss(d, r, loss);
            rel.per_path(p, m) = std::sqrt(beta) * std::polar(1.0, -wave_k * (d + r)) * common;
        }
    }
    rel.h = arma::sum(rel.per_path, 0).st() / std::sqrt(double(P));
    return rel;
}

} // namespace lsmimo

#endif

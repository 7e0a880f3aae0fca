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

#ifndef lsmimo_covariance_H
#define lsmimo_covariance_H

#include <armadillo>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include "channel.hpp"
#include "common.hpp"

namespace lsmimo
{

struct CovarianceMatrix
{
    arma::cx_mat R;             // M x M Hermitian PSD
    arma::uword draw_count = 0; // Monte Carlo draws, 0 = analytic
};

struct RankReport
{
    arma::uword effective_rank = 0;
    arma::vec eigenvalues;   // descending, negatives clamped to 0
    double threshold = 0.0;  // relative cutoff used
    double bound = 0.0;      // closed-form bound, filled by the caller when known
    bool low_draw_warning = false; // Monte Carlo covariance with fewer than 10*M draws
};

// Sample covariance (1/T) sum h_t h_t^H. The sampler maps a draw index to one
// channel vector and must derive its randomness from that index, which keeps the
// result independent of the number of worker threads. Draws are consumed in
// fixed-size blocks so the reduction order never changes.
inline CovarianceMatrix covariance_monte_carlo(const std::function<arma::cx_vec(arma::uword)> &sampler,
                                               arma::uword T, arma::uword n_threads = 1)
{
    if (T < 1)
        throw std::invalid_argument("covariance_monte_carlo: need at least one draw");

    arma::cx_vec first = sampler(0);
    arma::uword M = first.n_elem;
    const arma::uword block = 4096;

    arma::cx_mat R(M, M, arma::fill::zeros);
    arma::cx_mat H(M, std::min(block, T));

    for (arma::uword start = 0; start < T; start += block)
    {
        arma::uword count = std::min(block, T - start);
        if (H.n_cols != count)
            H.set_size(M, count);
        run_parallel(count, n_threads,
                     [&](arma::uword i)
                     {
                         arma::uword t = start + i;
                         H.col(i) = (t == 0) ? first : sampler(t);
                     });
        R += H * H.t();
    }

    CovarianceMatrix cov;
    cov.R = 0.5 * (R + R.t()) / double(T);
    cov.draw_count = T;
    return cov;
}

// Expected covariance beta * integral p(theta) a(theta) a(theta)^H dtheta for a
// plane-wave channel on any 1D geometry, by composite midpoint quadrature per
// cluster interval. nodes = 0 resolves the fastest phase oscillation across the
// aperture (8 nodes per period); explicit values give that many nodes per interval.
inline CovarianceMatrix covariance_ula_analytic(const ArrayGeometry &geom, const ClusterSet &clusters,
                                                double beta = 1.0, arma::uword nodes = 0)
{
    validate_clusters(clusters);
    if (!geom.is_linear())
        throw std::invalid_argument("covariance_ula_analytic: geometry must be 1D");
    if (beta <= 0.0)
        throw std::invalid_argument("covariance_ula_analytic: beta must be positive");
    if (nodes == 1)
        throw std::invalid_argument("covariance_ula_analytic: need at least 2 nodes per interval");

    arma::uword M = geom.n_antennas();
    double W = clusters.total_width();
    arma::cx_mat R(M, M, arma::fill::zeros);

    for (const auto &iv : clusters.intervals)
    {
        double width = iv.second - iv.first;
        if (W == 0.0)
        {
            // degenerate atoms, equal mass each
            arma::cx_vec a = steering_vector_positions(geom, iv.first);
            R += (beta / double(clusters.intervals.size())) * (a * a.t());
            continue;
        }
        if (width == 0.0)
            continue; // measure zero inside a non-degenerate union

        arma::uword n = nodes;
        if (n == 0)
            n = 8 * arma::uword(std::ceil(double(M) * width / pi));
        if (n < 2)
            n = 2;

        arma::cx_mat A(M, n);
        double h = width / double(n);
        for (arma::uword i = 0; i < n; ++i)
            A.col(i) = steering_vector_positions(geom, iv.first + (double(i) + 0.5) * h);
        R += (beta * h / W) * (A * A.t());
    }

    CovarianceMatrix cov;
    cov.R = 0.5 * (R + R.t());
    cov.draw_count = 0;
    return cov;
}

// Number of eigenvalues above threshold * lambda_max. Relative cutoff makes the
// count invariant under positive scaling of R.
inline RankReport effective_rank(const CovarianceMatrix &cov, double threshold = 1e-5)
{
    if (cov.R.n_rows != cov.R.n_cols || cov.R.n_rows == 0)
        throw std::invalid_argument("effective_rank: matrix must be square and non-empty");
    if (threshold <= 0.0 || threshold >= 1.0)
        throw std::invalid_argument("effective_rank: threshold must lie in (0, 1)");

    arma::vec ev;
    if (!arma::eig_sym(ev, cov.R))
        throw std::runtime_error("effective_rank: eigendecomposition failed");

    ev.transform([](double x) { return x < 0.0 ? 0.0 : x; });
    ev = arma::reverse(ev);

    RankReport rep;
    rep.eigenvalues = ev;
    rep.threshold = threshold;
    double lmax = ev(0);
    if (lmax > 0.0)
        rep.effective_rank = arma::uword(arma::accu(ev > threshold * lmax));
    rep.low_draw_warning = cov.draw_count > 0 && cov.draw_count < 10 * cov.R.n_rows;
    return rep;
}

// ------------------------------------------------------------------------
// Closed-form rank and dimension bounds
// ------------------------------------------------------------------------

// ULA: M * min(1, sum_q (cos th_min - cos th_max) * D / lambda)
inline double rank_bound_ula(const ClusterSet &clusters, double D, double lambda, arma::uword M)
{
    validate_clusters(clusters);
    double s = 0.0;
    for (const auto &iv : clusters.intervals)
        s += std::cos(iv.first) - std::cos(iv.second);
    return double(M) * std::min(1.0, s * D / lambda);
}

// Random linear array: sum_q (cos th_min - cos th_max) * M * Dbar / lambda.
// The o(M) slack of the underlying result is not added; callers treat the value
// as the asymptotic line.
inline double rank_bound_random(const ClusterSet &clusters, double Dbar, double lambda, arma::uword M)
{
    validate_clusters(clusters);
    double s = 0.0;
    for (const auto &iv : clusters.intervals)
        s += std::cos(iv.first) - std::cos(iv.second);
    return s * double(M) * Dbar / lambda;
}

// Dimension spanned by {a(b), b in [b1, b2]} on a random linear array
inline double rank_bound_span(double b1, double b2, double Dbar, double lambda, arma::uword M)
{
    if (!(b1 >= -1.0 && b1 < b2 && b2 <= 1.0))
        throw std::invalid_argument("rank_bound_span: need -1 <= b1 < b2 <= 1");
    return (b2 - b1) * double(M) * Dbar / lambda;
}

// Distributed antennas, one-ring scatterers of radius r: 4 pi r / lambda
inline double rank_bound_distributed(double r, double lambda)
{
    if (r < 0.0 || lambda <= 0.0)
        throw std::invalid_argument("rank_bound_distributed: invalid r or lambda");
    return 4.0 * pi * r / lambda;
}

// Scatterers on a segment of length Lseg: 2 Lseg / lambda
inline double rank_bound_segment(double Lseg, double lambda)
{
    if (Lseg < 0.0 || lambda <= 0.0)
        throw std::invalid_argument("rank_bound_segment: invalid length or lambda");
    return 2.0 * Lseg / lambda;
}

// rank(Rd + Ri) - rank(Rd) - rank(Ri) with a shared relative threshold.
// 0 means the subspaces are disjoint (rank additivity).
inline long long rank_additivity_gap(const CovarianceMatrix &Rd, const CovarianceMatrix &Ri,
                                     double threshold = 1e-5)
{
    if (Rd.R.n_rows != Ri.R.n_rows || Rd.R.n_cols != Ri.R.n_cols)
        throw std::invalid_argument("rank_additivity_gap: dimension mismatch");

    auto rank_of = [&](const arma::cx_mat &R) -> long long
    {
        if (arma::norm(R, "fro") == 0.0)
            return 0;
        CovarianceMatrix c;
        c.R = R;
        return (long long)effective_rank(c, threshold).effective_rank;
    };

    long long rs = rank_of(Rd.R + Ri.R);
    return rs - rank_of(Rd.R) - rank_of(Ri.R);
}

} // namespace lsmimo

#endif

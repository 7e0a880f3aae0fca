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

#ifndef lsmimo_filtering_H
#define lsmimo_filtering_H

#include <armadillo>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "estimation.hpp"
#include "quadrature.hpp"

namespace lsmimo
{

// SIR reported in place of infinity when the interference term vanishes; keeps
// CSV aggregation total-order safe.
inline constexpr double sir_infinity = 1e30;

struct SirBoundInput
{
    double Du = 0.0;     // inter-user distance, meters
    double r = 0.0;      // scattering ring radius, meters
    double lambda = 0.0; // carrier wavelength, meters
    arma::uword M = 0;   // antenna count
    double L = 0.0;      // network radius, meters (sigma^2 integral)
    double alpha = 1.0;  // path-loss amplitude
    double gamma = 2.0;  // path-loss exponent
};

struct BeamformerWeights
{
    arma::cx_rowvec w;
    std::string method;            // mrc_ls, mrc_mmse, mmse_bf, subspace_mrc
    arma::uword subspace_dim = 0;  // retained dimension M - m, subspace method only
};

// Matched filter output ratio |h1^H h1|^2 / |h2^H h1|^2
inline double matched_filter_sir(const arma::cx_vec &h1, const arma::cx_vec &h2)
{
    if (h1.n_elem != h2.n_elem)
        throw std::invalid_argument("matched_filter_sir: length mismatch");
    double sig = arma::norm(h1);
    if (sig == 0.0)
        throw std::invalid_argument("matched_filter_sir: target channel is zero");

    double num = sig * sig;
    double den = std::abs(arma::cdot(h2, h1));
    if (den == 0.0)
        return sir_infinity;
    double sir = (num / den) * (num / den);
    return std::min(sir, sir_infinity);
}

// Normalized correlation |h2^H h1| / (|h1| |h2|) between two path vectors
inline double path_correlation(const arma::cx_vec &h1p, const arma::cx_vec &h2q)
{
    if (h1p.n_elem != h2q.n_elem)
        throw std::invalid_argument("path_correlation: length mismatch");
    double n1 = arma::norm(h1p), n2 = arma::norm(h2q);
    if (n1 == 0.0 || n2 == 0.0)
        throw std::invalid_argument("path_correlation: zero vector");
    return std::abs(arma::cdot(h2q, h1p)) / (n1 * n2);
}

// J0 via the ascending power series up to |x| = 12 and the Hankel asymptotic
// expansion (optimal truncation) beyond; absolute error below 1e-10 everywhere.
inline double bessel_j0(double x)
{
    if (!std::isfinite(x))
        throw std::invalid_argument("bessel_j0: argument must be finite");
    x = std::abs(x);

    if (x <= 12.0)
    {
        double sum = 1.0, term = 1.0;
        double q = 0.25 * x * x;
        for (int k = 1; k <= 60; ++k)
        {
            term *= -q / double(k * k);
            sum += term;
            if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)))
                break;
        }
        return sum;
    }

    // P cos(chi) + Q sin(chi) with chi = x - pi/4; terms t_k shrink until
    // k ~ x, stop at the smallest one
    double p = 1.0, q = 0.0, t = 1.0, prev = 1.0;
    for (int k = 1; k <= 40; ++k)
    {
        t *= double(2 * k - 1) * double(2 * k - 1) / (8.0 * double(k) * x);
        if (k > 2 && t > prev)
            break;
        prev = t;
        if (k % 2 == 1)
            q += (k % 4 == 1) ? t : -t;
        else
            p += (k % 4 == 2) ? -t : t;
    }
    double chi = x - 0.25 * pi;
    return std::sqrt(2.0 / (pi * x)) * (p * std::cos(chi) + q * std::sin(chi));
}

// Validity edge of the explicit |J0| envelope bound: the closed form below needs
// D_u - 2r > sqrt(3 + 3^(2/3)) * lambda / (4 pi), about 0.17937 lambda.
inline double krasikov_validity_gap(double lambda)
{
    return std::sqrt(3.0 + std::cbrt(9.0)) * lambda / (4.0 * pi);
}

// Expected matched-filter SIR lower bound for closely spaced users with
// non-overlapping rings: with x = 2 pi (D_u - 2r) / lambda,
//   pi ((4x^2 - 3)^(3/2) - 3) / (16 x^2 - 20)
inline double krasikov_sir_bound(const SirBoundInput &in)
{
    if (in.lambda <= 0.0)
        throw std::invalid_argument("krasikov_sir_bound: wavelength must be positive");
    double gap = in.Du - 2.0 * in.r;
    double edge = krasikov_validity_gap(in.lambda);
    if (!(gap > edge))
        throw std::domain_error("krasikov_sir_bound: D_u - 2r must exceed " + std::to_string(edge) +
                                " m (0.17937 wavelengths)");

    double x = 2.0 * pi * gap / in.lambda;
    return pi * (std::pow(4.0 * x * x - 3.0, 1.5) - 3.0) / (16.0 * x * x - 20.0);
}

// Path-loss cross-moment sigma^2(D) = E{beta_2 beta_1} for antennas area-uniform
// in a disk of radius L, one user at the disk center and the other at distance D:
//   pref / (pi L^2) * int_0^L int_0^pi rho / ((rho+r)^g (sqrt(D^2+rho^2-2 rho D cos phi)+r)^g) dphi drho
// with pref = 2 alpha^2 by default. Each moment factor carries one alpha; the
// printed_prefactor flag switches to the single-alpha convention some references
// use. Both agree for alpha = 1.
inline double sigma_sq(double D, double L, double r, double alpha, double gamma,
                       arma::uword max_panels = 2000, bool printed_prefactor = false)
{
    if (D < 0.0 || L <= 0.0 || r < 0.0)
        throw std::invalid_argument("sigma_sq: need D >= 0, L > 0, r >= 0");
    if (alpha <= 0.0 || gamma <= 0.0)
        throw std::invalid_argument("sigma_sq: alpha and gamma must be positive");

    auto outer = [&](double phi)
    {
        double c = std::cos(phi);
        auto inner = [&](double rho)
        {
            double d2 = std::sqrt(D * D + rho * rho - 2.0 * rho * D * c);
            return rho / (std::pow(rho + r, gamma) * std::pow(d2 + r, gamma));
        };
        return integrate_adaptive(inner, 0.0, L, 1e-9, max_panels).value;
    };

    QuadratureResult q = integrate_adaptive(outer, 0.0, pi, 1e-8, max_panels);
    if (!q.converged)
        throw std::runtime_error("sigma_sq: quadrature did not converge, error estimate " +
                                 std::to_string(q.error));

    double pref = printed_prefactor ? 2.0 * alpha : 2.0 * alpha * alpha;
    return pref / (pi * L * L) * q.value;
}

// Distant-user SIR lower bound M C^2 / sigma^2(D_u - 2r); C is the mean channel
// gain per antenna, estimated from simulation
inline double sir_bound_distant(const SirBoundInput &in, double C)
{
    if (in.M < 1 || C <= 0.0)
        throw std::invalid_argument("sir_bound_distant: need M >= 1 and C > 0");
    double gap = in.Du - 2.0 * in.r;
    if (gap <= 0.0)
        throw std::invalid_argument("sir_bound_distant: rings must not overlap");

    double s2 = sigma_sq(gap, in.L, in.r, in.alpha, in.gamma);
    if (s2 <= 0.0)
        throw std::invalid_argument("sir_bound_distant: sigma^2 must be positive");
    return double(in.M) * C * C / s2;
}

// Samples of |h2q^H h1p|^2 / (sigma^2(D_pq) M) for two distant users, one at the
// disk center and one D_u away. Antennas and single-scatterer rings are redrawn
// per sample; sigma^2 is evaluated at the realized scatterer distance D_pq
// through a dense interpolation table (the integral is smooth in D).
inline arma::vec crosscorr_limit_samples(arma::uword M, double L, double r, double Du, double lambda,
                                         const PathLossModel &loss, arma::uword trials,
                                         std::uint64_t seed, arma::uword n_threads = 1)
{
    if (trials < 1)
        throw std::invalid_argument("crosscorr_limit_samples: need at least one trial");
    if (!loss.enabled)
        throw std::invalid_argument("crosscorr_limit_samples: path loss model must be enabled");
    if (Du <= 2.0 * r)
        throw std::invalid_argument("crosscorr_limit_samples: rings must not overlap");

    // sigma^2 lookup over the reachable scatterer distances [Du - 2r, Du + 2r]
    const arma::uword grid_n = 129;
    double d_lo = Du - 2.0 * r, d_hi = Du + 2.0 * r;
    arma::vec s2_grid(grid_n);
    run_parallel(grid_n, n_threads,
                 [&](arma::uword i)
                 {
                     double d = d_lo + (d_hi - d_lo) * double(i) / double(grid_n - 1);
                     s2_grid(i) = sigma_sq(d, L, r, loss.alpha, loss.gamma);
                 });
    auto s2_interp = [&](double d)
    {
        double x = (d - d_lo) / (d_hi - d_lo) * double(grid_n - 1);
        arma::uword i = std::min(arma::uword(x), grid_n - 2);
        double f = x - double(i);
        return (1.0 - f) * s2_grid(i) + f * s2_grid(i + 1);
    };

    arma::rowvec::fixed<2> user1 = {0.0, 0.0};
    arma::rowvec::fixed<2> user2 = {Du, 0.0};

    arma::vec samples(trials);
    run_parallel(trials, n_threads,
                 [&](arma::uword t)
                 {
                     ArrayGeometry geom = make_disk_network(M, L, lambda, derive_seed(seed, 11, t));
                     ScattererSet s1 = place_scatterers_ring(user1, r, 1, derive_seed(seed, 12, t));
                     ScattererSet s2 = place_scatterers_ring(user2, r, 1, derive_seed(seed, 13, t));
                     ChannelRealization c1 = draw_one_ring_channel(geom, s1, loss, derive_seed(seed, 14, t));
                     ChannelRealization c2 = draw_one_ring_channel(geom, s2, loss, derive_seed(seed, 15, t));

                     double Dpq = std::hypot(s1.scatterers(0, 0) - s2.scatterers(0, 0),
                                             s1.scatterers(0, 1) - s2.scatterers(0, 1));
                     std::complex<double> ip = arma::cdot(c2.h, c1.h);
                     samples(t) = std::norm(ip) / (s2_interp(Dpq) * double(M));
                 });
    return samples;
}

// Interference-avoiding projector: eigendecompose R_I with eigenvalues
// descending, drop the m dominant directions (eigenvalues above threshold *
// lambda_max) and return the remaining (M - m) x M block of U^H. When every
// direction is occupied (m = M) the call fails unless m_max > 0 caps the dropped
// count, which keeps at least M - m_max rows and merely avoids the strongest modes.
inline arma::cx_mat subspace_filter(const CovarianceMatrix &Ri, double threshold = 1e-5,
                                    arma::uword m_max = 0)
{
    arma::uword M = Ri.R.n_rows;
    if (M == 0 || Ri.R.n_cols != M)
        throw std::invalid_argument("subspace_filter: matrix must be square and non-empty");

    arma::vec ev;
    arma::cx_mat U;
    if (!arma::eig_sym(ev, U, Ri.R))
        throw std::runtime_error("subspace_filter: eigendecomposition failed");

    // eig_sym is ascending; flip to descending
    ev = arma::reverse(ev);
    U = arma::fliplr(U);

    double lmax = std::max(ev(0), 0.0);
    arma::uword m = lmax > 0.0 ? arma::uword(arma::accu(ev > threshold * lmax)) : 0;
    if (m >= M)
    {
        if (m_max == 0 || m_max >= M)
            throw std::runtime_error("subspace_filter: interference covariance occupies every direction; "
                                     "pass m_max to retain the weakest ones");
        m = m_max;
    }
    return U.cols(m, M - 1).t();
}

// LS estimate confined to the interference-free rows, then matched filtering
// lifted back to antenna space: w = (W1 Y s* / tau)^H W1
inline BeamformerWeights subspace_mrc_receiver(const arma::cx_mat &W1, const arma::cx_mat &Y,
                                               const PilotConfig &pilot)
{
    if (W1.n_cols != Y.n_rows)
        throw std::invalid_argument("subspace_mrc_receiver: filter and Y dimensions disagree");
    if (Y.n_cols != pilot.tau() || pilot.tau() < 1)
        throw std::invalid_argument("subspace_mrc_receiver: Y column count must equal tau");

    arma::cx_vec h_low = W1 * Y * arma::conj(pilot.s) / double(pilot.tau());

    BeamformerWeights bw;
    bw.w = h_low.t() * W1;
    bw.method = "subspace_mrc";
    bw.subspace_dim = W1.n_rows;
    return bw;
}

// Covariance-aware combiner w = h_hat^H (sigma_n^2 I + R_int)^{-1}
inline BeamformerWeights mmse_beamformer(const arma::cx_vec &h_hat, const CovarianceMatrix &R_int,
                                         double noise_var)
{
    arma::uword M = h_hat.n_elem;
    if (R_int.R.n_rows != M || R_int.R.n_cols != M)
        throw std::invalid_argument("mmse_beamformer: dimension mismatch");
    if (noise_var < 0.0)
        throw std::invalid_argument("mmse_beamformer: noise variance must be non-negative");

    arma::cx_mat A = R_int.R;
    A.diag() += noise_var;

    arma::cx_vec z;
    if (!arma::solve(z, A, h_hat, arma::solve_opts::likely_sympd + arma::solve_opts::no_approx))
        z = pseudo_inverse(A) * h_hat;

    BeamformerWeights bw;
    bw.w = z.t();
    bw.method = "mmse_bf";
    return bw;
}

// Uplink SINR of user 1 under unit transmit powers:
// |w h1|^2 / (sum_{k>=2} |w h_k|^2 + sigma_n^2 ||w||^2)
inline double uplink_sinr(const BeamformerWeights &bw, const std::vector<ChannelRealization> &channels,
                          double noise_var)
{
    if (channels.empty())
        throw std::invalid_argument("uplink_sinr: need at least the target channel");
    if (arma::norm(bw.w) == 0.0)
        throw std::invalid_argument("uplink_sinr: weights are zero");

    auto gain = [&](const ChannelRealization &c)
    {
        std::complex<double> g = arma::as_scalar(bw.w * c.h);
        return std::norm(g);
    };

    double sig = gain(channels.front());
    double interf = 0.0;
    for (std::size_t k = 1; k < channels.size(); ++k)
        interf += gain(channels[k]);

    double nw = arma::norm(bw.w);
    double den = interf + noise_var * nw * nw;
    if (den == 0.0)
        return sir_infinity;
    return std::min(sig / den, sir_infinity);
}

// Sum over users of log2(1 + SINR)
inline double sum_rate(const std::vector<double> &sinrs)
{
    double acc = 0.0;
    for (double s : sinrs)
    {
        if (s < 0.0)
            throw std::invalid_argument("sum_rate: SINR must be non-negative");
        acc += std::log2(1.0 + s);
    }
    return acc;
}

inline double per_cell_rate(const std::vector<double> &sinrs, arma::uword n_cells)
{
    if (n_cells < 1)
        throw std::invalid_argument("per_cell_rate: need at least one cell");
    return sum_rate(sinrs) / double(n_cells);
}

} // namespace lsmimo

#endif

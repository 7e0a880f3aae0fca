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

#ifndef lsmimo_estimation_H
#define lsmimo_estimation_H

#include <armadillo>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "covariance.hpp"
#include "rng.hpp"

namespace lsmimo
{

struct PilotConfig
{
    arma::cx_vec s;         // length tau, s^H s = tau
    double noise_var = 0.0; // sigma_n^2 per received entry

    arma::uword tau() const
    {
        return s.n_elem;
    }
};

// Constant-modulus pilot with pseudo-random phases; s^H s = tau holds exactly
inline PilotConfig make_pilot(arma::uword tau, double noise_var, std::uint64_t seed = 0x706c74)
{
    if (tau < 1)
        throw std::invalid_argument("make_pilot: tau must be at least 1");
    if (noise_var < 0.0)
        throw std::invalid_argument("make_pilot: noise variance must be non-negative");

    PilotConfig p;
    p.s.set_size(tau);
    p.noise_var = noise_var;
    Rng rng(seed);
    for (arma::uword i = 0; i < tau; ++i)
        p.s(i) = std::polar(1.0, rng.uniform(0.0, 2.0 * pi));
    return p;
}

struct EstimationResult
{
    arma::cx_vec h_hat;
    std::string method;
    double mse_db = std::numeric_limits<double>::quiet_NaN(); // filled once the truth is known
    double rcond = std::numeric_limits<double>::quiet_NaN();  // set when a pseudo-solve was needed
};

// Received pilot block Y = sum_b h_b s^T + N, all users sharing the same pilot
// (the contamination scenario). Noise is i.i.d. circular complex Gaussian with
// per-entry variance noise_var.
inline arma::cx_mat simulate_pilot_rx(const std::vector<ChannelRealization> &channels,
                                      const PilotConfig &pilot, std::uint64_t seed)
{
    if (channels.empty())
        throw std::invalid_argument("simulate_pilot_rx: need at least one channel");
    arma::uword M = channels.front().h.n_elem;
    for (const auto &c : channels)
        if (c.h.n_elem != M)
            throw std::invalid_argument("simulate_pilot_rx: channel length mismatch");

    arma::uword tau = pilot.tau();
    arma::cx_mat Y(M, tau, arma::fill::zeros);
    for (const auto &c : channels)
        Y += c.h * pilot.s.st();

    if (pilot.noise_var > 0.0)
    {
        Rng rng(seed);
        for (arma::uword j = 0; j < tau; ++j)
            for (arma::uword m = 0; m < M; ++m)
                Y(m, j) += rng.cnormal(pilot.noise_var);
    }
    return Y;
}

// Least squares: h_hat = Y s* / tau
inline EstimationResult ls_estimate(const arma::cx_mat &Y, const PilotConfig &pilot)
{
    if (pilot.tau() < 1 || arma::norm(pilot.s) == 0.0)
        throw std::invalid_argument("ls_estimate: pilot must be non-zero");
    if (Y.n_cols != pilot.tau())
        throw std::invalid_argument("ls_estimate: Y column count must equal tau");

    EstimationResult res;
    res.h_hat = Y * arma::conj(pilot.s) / double(pilot.tau());
    res.method = "ls";
    return res;
}

// SVD pseudoinverse; singular values at or below tol * sigma_max are dropped
inline arma::cx_mat pseudo_inverse(const arma::cx_mat &A, double tol = 1e-10)
{
    if (!A.is_finite())
        throw std::invalid_argument("pseudo_inverse: matrix has non-finite entries");

    arma::cx_mat U, V;
    arma::vec sv;
    if (!arma::svd_econ(U, sv, V, A))
        throw std::runtime_error("pseudo_inverse: SVD failed");

    double cut = sv.is_empty() ? 0.0 : tol * sv(0);
    arma::vec inv_sv = sv;
    for (arma::uword i = 0; i < sv.n_elem; ++i)
        inv_sv(i) = sv(i) > cut && sv(i) > 0.0 ? 1.0 / sv(i) : 0.0;
    return V * arma::diagmat(inv_sv) * U.t();
}

// Bayesian estimate of the first user's channel under shared pilots:
//   h_hat = R_1 (sigma_n^2 I + tau * sum_b R_b)^{-1} (Y s*),
// realized as one Hermitian linear solve. A singular system (noiseless, rank
// deficient covariance sum) falls back to the pseudoinverse and records the
// reciprocal condition number.
inline EstimationResult mmse_estimate(const arma::cx_mat &Y, const PilotConfig &pilot,
                                      const std::vector<CovarianceMatrix> &R_all)
{
    if (R_all.empty())
        throw std::invalid_argument("mmse_estimate: need at least one covariance");
    arma::uword M = Y.n_rows;
    for (const auto &cov : R_all)
        if (cov.R.n_rows != M || cov.R.n_cols != M)
            throw std::invalid_argument("mmse_estimate: covariance dimension mismatch");
    if (Y.n_cols != pilot.tau())
        throw std::invalid_argument("mmse_estimate: Y column count must equal tau");

    double tau = double(pilot.tau());
    arma::cx_vec x = Y * arma::conj(pilot.s);

    arma::cx_mat A(M, M, arma::fill::zeros);
    for (const auto &cov : R_all)
        A += cov.R;
    A *= tau;
    A.diag() += pilot.noise_var;

    EstimationResult res;
    res.method = "mmse";

    arma::cx_vec z;
    bool solved = pilot.noise_var > 0.0 &&
                  arma::solve(z, A, x, arma::solve_opts::likely_sympd + arma::solve_opts::no_approx);
    if (!solved)
    {
        res.rcond = arma::rcond(A);
        z = pseudo_inverse(A) * x;
    }
    res.h_hat = R_all.front().R * z;
    return res;
}

// MMSE error covariance without noise: C_e = Rd - Rd (Rd + Ri)^+ Rd.
// Zero exactly when the signal subspaces of Rd and Ri are disjoint.
inline arma::cx_mat error_covariance_noiseless(const CovarianceMatrix &Rd, const CovarianceMatrix &Ri,
                                               double tol = 1e-10)
{
    if (Rd.R.n_rows != Ri.R.n_rows || Rd.R.n_cols != Ri.R.n_cols)
        throw std::invalid_argument("error_covariance_noiseless: dimension mismatch");

    arma::cx_mat Ce = Rd.R - Rd.R * pseudo_inverse(Rd.R + Ri.R, tol) * Rd.R;
    return 0.5 * (Ce + Ce.t());
}

// 10 log10(||h_hat - h||^2 / ||h||^2), floored at -300 dB for exact estimates
inline double estimation_mse_db(const arma::cx_vec &h_hat, const arma::cx_vec &h)
{
    if (h_hat.n_elem != h.n_elem)
        throw std::invalid_argument("estimation_mse_db: length mismatch");
    double ref = arma::norm(h);
    if (ref <= 0.0)
        throw std::invalid_argument("estimation_mse_db: true channel must be non-zero");

    double err = arma::norm(h_hat - h);
    double ratio = (err * err) / (ref * ref);
    if (ratio < 1e-30)
        return -300.0;
    return std::max(10.0 * std::log10(ratio), -300.0);
}

} // namespace lsmimo

#endif

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

#include <lsmimo/estimation.hpp>

using namespace lsmimo;

namespace
{

arma::cx_vec random_cx_vec(arma::uword n, std::uint64_t seed)
{
    Rng rng(seed);
    arma::cx_vec v(n);
    for (auto &x : v)
        x = rng.cnormal(1.0);
    return v;
}

} // namespace

TEST_CASE("pilot sequences are constant modulus with s^H s = tau", "[estimation]")
{
    PilotConfig p = make_pilot(16, 0.01);
    REQUIRE(p.tau() == 16);
    CHECK(std::abs(arma::cdot(p.s, p.s).real() - 16.0) < 1e-12);
    for (arma::uword i = 0; i < 16; ++i)
        CHECK(std::abs(std::abs(p.s(i)) - 1.0) < 1e-14);

    PilotConfig q = make_pilot(16, 0.01);
    CHECK(arma::norm(p.s - q.s) == 0.0);

    CHECK_THROWS_AS(make_pilot(0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(make_pilot(4, -1.0), std::invalid_argument);
}

TEST_CASE("noiseless LS recovers a single user exactly", "[estimation]")
{
    PilotConfig p = make_pilot(8, 0.0);
    ChannelRealization c;
    c.h = random_cx_vec(24, 3);

    arma::cx_mat Y = simulate_pilot_rx({c}, p, 1);
    EstimationResult ls = ls_estimate(Y, p);
    CHECK(arma::norm(ls.h_hat - c.h) < 1e-12);
    CHECK(estimation_mse_db(ls.h_hat, c.h) == -300.0);
}

TEST_CASE("shared pilots contaminate the LS estimate additively", "[estimation]")
{
    PilotConfig p = make_pilot(8, 0.0);
    ChannelRealization a, b;
    a.h = random_cx_vec(16, 4);
    b.h = random_cx_vec(16, 5);

    arma::cx_mat Y = simulate_pilot_rx({a, b}, p, 1);
    EstimationResult ls = ls_estimate(Y, p);
    CHECK(arma::norm(ls.h_hat - (a.h + b.h)) < 1e-12);
}

TEST_CASE("pilot noise is reproducible and has the configured variance", "[estimation]")
{
    PilotConfig p = make_pilot(64, 0.25);
    ChannelRealization c;
    c.h.zeros(128);

    arma::cx_mat Y1 = simulate_pilot_rx({c}, p, 42);
    arma::cx_mat Y2 = simulate_pilot_rx({c}, p, 42);
    arma::cx_mat Y3 = simulate_pilot_rx({c}, p, 43);
    CHECK(arma::norm(Y1 - Y2, "fro") == 0.0);
    CHECK(arma::norm(Y1 - Y3, "fro") > 1e-6);

    double var = arma::accu(arma::square(arma::abs(Y1))) / double(Y1.n_elem);
    CHECK(var == Catch::Approx(0.25).margin(0.01));
}

TEST_CASE("pseudo inverse satisfies the four Penrose identities", "[estimation]")
{
    // rank-deficient: 8x5 with rank 3
    arma::cx_mat B = arma::cx_mat(8, 3, arma::fill::zeros);
    arma::cx_mat C = arma::cx_mat(3, 5, arma::fill::zeros);
    Rng rng(21);
    for (auto &x : B)
        x = rng.cnormal(1.0);
    for (auto &x : C)
        x = rng.cnormal(1.0);
    arma::cx_mat A = B * C;

    arma::cx_mat Ap = pseudo_inverse(A);
    double scale = arma::norm(A, "fro");
    CHECK(arma::norm(A * Ap * A - A, "fro") < 1e-10 * scale);
    CHECK(arma::norm(Ap * A * Ap - Ap, "fro") < 1e-10 * arma::norm(Ap, "fro"));
    CHECK(arma::norm(arma::cx_mat((A * Ap).t()) - A * Ap, "fro") < 1e-10);
    CHECK(arma::norm(arma::cx_mat((Ap * A).t()) - Ap * A, "fro") < 1e-10);

    // tolerance floor: near-null directions are dropped, keeping the inverse bounded
    arma::cx_mat D = A;
    D += 1e-14 * random_cx_vec(8, 8) * random_cx_vec(5, 9).t();
    arma::cx_mat Dp = pseudo_inverse(D, 1e-10);
    CHECK(arma::norm(Dp, "fro") < 1e6);
}

TEST_CASE("MMSE with the true covariances beats LS under contamination", "[estimation]")
{
    const arma::uword M = 48, trials = 100;
    // two users with rank-limited, nearly disjoint covariances
    arma::cx_mat U1(M, 6, arma::fill::zeros), U2(M, 6, arma::fill::zeros);
    Rng rng(6);
    for (auto &x : U1)
        x = rng.cnormal(1.0);
    for (auto &x : U2)
        x = rng.cnormal(1.0);
    CovarianceMatrix R1, R2;
    R1.R = U1 * U1.t() / 6.0;
    R2.R = U2 * U2.t() / 6.0;

    PilotConfig p = make_pilot(8, 0.05);

    double mse_mmse = 0.0, mse_ls = 0.0;
    for (arma::uword t = 0; t < trials; ++t)
    {
        // h_k = U_k g_k / sqrt(6) gives covariance R_k
        Rng draw(derive_seed(100, 1, t));
        arma::cx_vec g1(6), g2(6);
        for (auto &x : g1)
            x = draw.cnormal(1.0);
        for (auto &x : g2)
            x = draw.cnormal(1.0);
        ChannelRealization c1, c2;
        c1.h = U1 * g1 / std::sqrt(6.0);
        c2.h = U2 * g2 / std::sqrt(6.0);

        arma::cx_mat Y = simulate_pilot_rx({c1, c2}, p, derive_seed(100, 2, t));
        mse_mmse += std::pow(arma::norm(mmse_estimate(Y, p, {R1, R2}).h_hat - c1.h), 2);
        mse_ls += std::pow(arma::norm(ls_estimate(Y, p).h_hat - c1.h), 2);
    }
    CHECK(mse_mmse < mse_ls);
}

TEST_CASE("MMSE estimate dimensions and validation", "[estimation]")
{
    PilotConfig p = make_pilot(4, 0.01);
    arma::cx_mat Y(10, 4, arma::fill::zeros);
    CovarianceMatrix R;
    R.R.zeros(10, 10);
    R.R.diag() += 1.0;

    EstimationResult res = mmse_estimate(Y, p, {R});
    CHECK(res.h_hat.n_elem == 10);
    CHECK(res.method == "mmse");

    CovarianceMatrix bad;
    bad.R.zeros(9, 9);
    CHECK_THROWS_AS(mmse_estimate(Y, p, {bad}), std::invalid_argument);
    CHECK_THROWS_AS(mmse_estimate(Y, p, {}), std::invalid_argument);
    arma::cx_mat Ywrong(10, 3, arma::fill::zeros);
    CHECK_THROWS_AS(mmse_estimate(Ywrong, p, {R}), std::invalid_argument);
}

TEST_CASE("noiseless error covariance vanishes exactly under rank additivity", "[estimation]")
{
    // block-disjoint supports
    Rng rng(14);
    arma::cx_mat A(8, 3, arma::fill::zeros), B(8, 2, arma::fill::zeros);
    for (auto &x : A)
        x = rng.cnormal(1.0);
    for (auto &x : B)
        x = rng.cnormal(1.0);
    CovarianceMatrix Rd, Ri;
    Rd.R.zeros(16, 16);
    Ri.R.zeros(16, 16);
    Rd.R.submat(0, 0, 7, 7) = A * A.t();
    Ri.R.submat(8, 8, 15, 15) = B * B.t();

    arma::cx_mat Ce = error_covariance_noiseless(Rd, Ri);
    CHECK(arma::norm(Ce, "fro") < 1e-10 * arma::norm(Rd.R, "fro"));

    // identical covariances: C_e = Rd - Rd (2 Rd)^+ Rd = Rd / 2
    arma::cx_mat Half = error_covariance_noiseless(Rd, Rd);
    CHECK(arma::norm(Half - 0.5 * Rd.R, "fro") < 1e-10 * arma::norm(Rd.R, "fro"));

    CHECK_THROWS_AS(error_covariance_noiseless(Rd, CovarianceMatrix{}), std::invalid_argument);
}

TEST_CASE("estimation error in dB floors at -300", "[estimation]")
{
    arma::cx_vec h = random_cx_vec(10, 50);
    CHECK(estimation_mse_db(h, h) == -300.0);

    arma::cx_vec off = h;
    off(0) += std::complex<double>(arma::norm(h), 0.0); // ||e||^2 = ||h||^2
    CHECK(estimation_mse_db(off, h) == Catch::Approx(0.0).margin(1e-10));

    arma::cx_vec tenth = h;
    tenth(0) += std::complex<double>(0.1 * arma::norm(h), 0.0);
    CHECK(estimation_mse_db(tenth, h) == Catch::Approx(-20.0).margin(1e-10));

    CHECK_THROWS_AS(estimation_mse_db(h, arma::cx_vec(9, arma::fill::zeros)), std::invalid_argument);
    CHECK_THROWS_AS(estimation_mse_db(arma::cx_vec(3, arma::fill::zeros),
                                      arma::cx_vec(3, arma::fill::zeros)),
                    std::invalid_argument);
}

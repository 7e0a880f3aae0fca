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

#ifndef lsmimo_quadrature_H
#define lsmimo_quadrature_H

#include <armadillo>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lsmimo
{

struct QuadratureResult
{
    double value = 0.0;
    double error = 0.0;       // estimated absolute error
    arma::uword calls = 0;    // integrand evaluations
    bool converged = false;
};

// Composite midpoint rule with n equal panels
template <typename Fn>
inline double integrate_midpoint(Fn f, double a, double b, arma::uword n)
{
    if (n < 1)
        throw std::invalid_argument("integrate_midpoint: need at least one panel");
    double h = (b - a) / double(n);
    double acc = 0.0;
    for (arma::uword i = 0; i < n; ++i)
        acc += f(a + (double(i) + 0.5) * h);
    return acc * h;
}

namespace detail
{

// Gauss 7 / Kronrod 15 pair on [-1, 1]: {abscissa, Kronrod weight, Gauss weight}.
// Gauss weight 0 marks the Kronrod-only nodes.
inline constexpr double gk15[8][3] = {
    {0.000000000000000000, 0.209482141084727828, 0.417959183673469388},
    {0.207784955007898468, 0.204432940075298892, 0.000000000000000000},
    {0.405845151377397167, 0.190350578064785410, 0.381830050505118945},
    {0.586087235467691130, 0.169004726639267903, 0.000000000000000000},
    {0.741531185599394440, 0.140653259715525919, 0.279705391489276668},
    {0.864864423359769073, 0.104790010322250184, 0.000000000000000000},
    {0.949107912342758525, 0.063092092629978553, 0.129484966168869693},
    {0.991455371120812639, 0.022935322010529225, 0.000000000000000000}};

template <typename Fn>
inline void gk15_panel(Fn &f, double a, double b, double &kronrod, double &err)
{
    double mid = 0.5 * (a + b);
    double rad = 0.5 * (b - a);
    double fk = 0.0, fg = 0.0;
    for (int i = 0; i < 8; ++i)
    {
        double fsum = (i == 0) ? f(mid) : f(mid - rad * gk15[i][0]) + f(mid + rad * gk15[i][0]);
        fk += gk15[i][1] * fsum;
        fg += gk15[i][2] * fsum;
    }
    kronrod = rad * fk;
    double gauss = rad * fg;
    err = std::abs(kronrod - gauss);
    err = 200.0 * err * std::sqrt(200.0 * err); // (200 |K-G|)^(3/2) error model
}

} // namespace detail

// Adaptive bisection on a stack of panels, worst panel refined first would need a
// heap; plain LIFO refinement is sufficient here and keeps evaluation order fixed.
template <typename Fn>
inline QuadratureResult integrate_adaptive(Fn f, double a, double b, double rel_tol = 1e-8,
                                           arma::uword max_panels = 2000)
{
    if (!(b >= a))
        throw std::invalid_argument("integrate_adaptive: invalid interval");

    QuadratureResult res;
    if (a == b)
    {
        res.converged = true;
        return res;
    }

    struct Panel
    {
        double a, b, value, error;
    };

    double v0, e0;
    detail::gk15_panel(f, a, b, v0, e0);
    res.calls = 15;

    std::vector<Panel> todo{{a, b, v0, e0}};
    double done_value = 0.0, done_error = 0.0;
    double total = v0; // running estimate used for the relative target
    arma::uword n_panels = 1;

    while (!todo.empty())
    {
        double target = rel_tol * std::max(std::abs(total), 1e-300);
        Panel p = todo.back();
        todo.pop_back();

        if (p.error <= target * (p.b - p.a) / (b - a) || n_panels >= max_panels)
        {
            done_value += p.value;
            done_error += p.error;
            continue;
        }

        double mid = 0.5 * (p.a + p.b);
        Panel lo{p.a, mid, 0, 0}, hi{mid, p.b, 0, 0};
        detail::gk15_panel(f, lo.a, lo.b, lo.value, lo.error);
        detail::gk15_panel(f, hi.a, hi.b, hi.value, hi.error);
        res.calls += 30;
        total += lo.value + hi.value - p.value;
        ++n_panels;
        todo.push_back(lo);
        todo.push_back(hi);
    }

    res.value = done_value;
    res.error = done_error;
    res.converged = done_error <= rel_tol * std::max(std::abs(done_value), 1e-300) * 1.5 + 1e-300;
    return res;
}

} // namespace lsmimo

#endif

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

#ifndef lsmimo_experiments_H
#define lsmimo_experiments_H

#include <algorithm>
#include <armadillo>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csv.hpp"
#include "filtering.hpp"

namespace lsmimo
{

// Raised for anything wrong with a config (unknown experiment, missing or
// unknown key, malformed file); the CLI maps it to its own exit code.
struct ConfigError : std::runtime_error
{
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

struct ExperimentConfig
{
    std::string experiment;
    std::map<std::string, double> params;
    std::uint64_t seed = 1;
    arma::uword threads = 1; // worker threads; results do not depend on this
};

struct ExperimentInfo
{
    std::string name;
    std::string summary;
    std::vector<std::string> required;
    std::vector<std::pair<std::string, double>> defaults;
};

// The registry drives config validation and the CLI `list` output. A trials or
// cov_draws default of 0 means "resolved at run time" (10 * M covariance draws).
inline const std::vector<ExperimentInfo> &experiment_registry()
{
    static const std::vector<ExperimentInfo> reg = {
        {"rank-vs-m",
         "effective rank of a random linear array covariance vs antenna count, with the closed-form line",
         {"m_start", "m_stop", "m_step", "theta_min_deg", "theta_max_deg"},
         {{"lambda", 0.15}, {"dbar_over_lambda", 0.5}, {"threshold", 1e-5}}},
        {"pilot-decontamination",
         "LS vs MMSE channel estimation error under a shared pilot, two users with disjoint AOA clusters",
         {"m_start", "m_stop", "m_step"},
         {{"lambda", 0.15},
          {"dbar_over_lambda", 0.5},
          {"ula", 0},
          {"tau", 16},
          {"noise_var", 0.01},
          {"trials", 200},
          {"paths", 50},
          {"theta1_min_deg", 60},
          {"theta1_max_deg", 90},
          {"theta2_min_deg", 120},
          {"theta2_max_deg", 150}}},
        {"rank-vs-r",
         "effective rank of the one-ring covariance vs scattering radius on a distributed array",
         {"m", "r_start", "r_stop", "r_step"},
         {{"lambda", 0.15}, {"net_radius", 500}, {"paths", 1}, {"cov_draws", 0}, {"threshold", 1e-5}}},
        {"segment-rank",
         "effective rank of the covariance for scatterers on a line segment vs segment length",
         {"m", "lseg_start", "lseg_stop", "lseg_step"},
         {{"lambda", 0.15}, {"net_radius", 500}, {"paths", 1}, {"cov_draws", 0}, {"threshold", 1e-5}}},
        {"path-correlation",
         "normalized correlation of two scattering-path vectors vs scatterer spacing, with the |J0| limit",
         {"m"},
         {{"lambda", 0.15}, {"net_radius", 500}, {"d_stop_over_lambda", 3}, {"d_step_over_lambda", 0.05}}},
        {"sigma-sq",
         "path-loss cross-moment sigma^2(D) on a D grid",
         {"d_start", "d_stop", "d_step"},
         {{"net_radius", 500}, {"r", 15}, {"alpha", 1e7}, {"gamma", 2.5}, {"printed_alpha", 0}}},
        {"crosscorr-dist",
         "normalized squared cross-correlation samples for two distant users, with the fitted exponential law",
         {"m", "du"},
         {{"lambda", 0.15}, {"net_radius", 500}, {"r", 15}, {"alpha", 1e7}, {"gamma", 2.5}, {"samples", 1000}}},
        {"mse-vs-distance",
         "LS and MMSE channel estimation error vs distance between two users on a distributed array",
         {"m", "d_start", "d_stop", "d_step"},
         {{"lambda", 0.15},
          {"net_radius", 500},
          {"r", 15},
          {"paths", 50},
          {"alpha", 1e7},
          {"gamma", 2.5},
          {"snr_edge_db", 20},
          {"tau", 16},
          {"trials", 200},
          {"cov_draws", 0},
          {"cov_paths", 1}}},
        {"sumrate-vs-distance",
         "uplink sum-rate of four receivers vs distance between two users sharing a pilot",
         {"m", "d_start", "d_stop", "d_step"},
         {{"lambda", 0.15},
          {"net_radius", 500},
          {"r", 15},
          {"paths", 50},
          {"alpha", 1e7},
          {"gamma", 2.5},
          {"snr_edge_db", 20},
          {"tau", 16},
          {"trials", 200},
          {"cov_draws", 0},
          {"cov_paths", 1},
          {"threshold", 1e-5},
          {"subspace_cap", 0.9}}},
        {"percell-rate-vs-r",
         "per-cell uplink rate in a 7-cell network vs scattering radius",
         {"m", "r_start", "r_stop", "r_step"},
         {{"lambda", 0.15},
          {"cell_radius", 500},
          {"paths", 50},
          {"alpha", 1e7},
          {"gamma", 2.5},
          {"snr_edge_db", 20},
          {"tau", 16},
          {"trials", 50},
          {"cov_draws", 0},
          {"cov_paths", 1},
          {"threshold", 1e-5},
          {"subspace_cap", 0.9}}}};
    return reg;
}

inline const ExperimentInfo &find_experiment(const std::string &name)
{
    for (const auto &info : experiment_registry())
        if (info.name == name)
            return info;
    throw ConfigError("unknown experiment '" + name + "'; see `list` for the available ones");
}

// Flat key = value text; '#' starts a comment. 'experiment' selects the
// pipeline, 'seed' is an integer, everything else is a scalar parameter.
inline ExperimentConfig parse_config_text(const std::string &text)
{
    ExperimentConfig cfg;
    bool seen_experiment = false;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        auto trim = [](std::string s)
        {
            std::size_t a = s.find_first_not_of(" \t\r");
            std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty())
            continue;

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");

        if (key == "experiment")
        {
            cfg.experiment = value;
            seen_experiment = true;
            continue;
        }
        if (key == "seed")
        {
            try
            {
                cfg.seed = std::stoull(value);
            }
            catch (...)
            {
                throw ConfigError("config line " + std::to_string(line_no) + ": seed must be an integer");
            }
            continue;
        }

        try
        {
            std::size_t used = 0;
            double v = std::stod(value, &used);
            if (used != value.size())
                throw std::invalid_argument("");
            if (cfg.params.count(key))
                throw ConfigError("duplicate key '" + key + "'");
            cfg.params[key] = v;
        }
        catch (const ConfigError &)
        {
            throw;
        }
        catch (...)
        {
            throw ConfigError("config line " + std::to_string(line_no) + ": value for '" + key +
                              "' is not a number");
        }
    }

    if (!seen_experiment)
        throw ConfigError("config is missing the 'experiment' key");
    return cfg;
}

inline ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace detail
{

// Validates keys against the registry and merges defaults. Every resolved value
// lands in the metadata so reruns need nothing implicit.
inline std::map<std::string, double> resolve_params(const ExperimentConfig &cfg, const ExperimentInfo &info)
{
    for (const auto &kv : cfg.params)
    {
        bool known = std::find(info.required.begin(), info.required.end(), kv.first) != info.required.end();
        for (const auto &def : info.defaults)
            known = known || def.first == kv.first;
        if (!known)
            throw ConfigError("unknown key '" + kv.first + "' for experiment '" + info.name + "'");
    }
    for (const auto &req : info.required)
        if (!cfg.params.count(req))
            throw ConfigError("missing required key '" + req + "' for experiment '" + info.name + "'");

    std::map<std::string, double> p = cfg.params;
    for (const auto &def : info.defaults)
        p.emplace(def.first, def.second);
    return p;
}

inline std::vector<double> sweep_grid(double start, double stop, double step)
{
    if (step <= 0.0 || stop < start)
        throw ConfigError("sweep grid needs step > 0 and stop >= start");
    std::vector<double> g;
    for (double v = start; v <= stop + 0.5 * step; v += step)
        g.push_back(v);
    return g;
}

inline arma::uword as_count(double v, const char *what)
{
    if (!(v >= 0.0) || v != std::floor(v))
        throw ConfigError(std::string(what) + " must be a non-negative integer");
    return arma::uword(v);
}

inline double deg2rad(double d)
{
    return d * pi / 180.0;
}

// Per-antenna cell-edge SNR -> noise variance: snr = alpha / ((L + r)^gamma * noise)
inline double noise_from_edge_snr(double snr_db, double alpha, double L, double r, double gamma)
{
    double snr = std::pow(10.0, snr_db / 10.0);
    return alpha / (std::pow(L + r, gamma) * snr);
}

inline double mean_of(const std::vector<double> &v)
{
    return v.empty() ? 0.0 : pairwise_sum(v) / double(v.size());
}

inline double db10(double x)
{
    return 10.0 * std::log10(std::max(x, 1e-30));
}

// Explicit single-scatterer set (path-correlation probes put scatterers at
// chosen coordinates rather than on a random ring)
inline ScattererSet point_scatterer(double x, double y)
{
    ScattererSet s;
    s.center = {x, y};
    s.ring_radius = 0.0;
    s.layout = ScattererLayout::ring;
    s.scatterers.set_size(1, 2);
    s.scatterers(0, 0) = x;
    s.scatterers(0, 1) = y;
    return s;
}

} // namespace detail

// ------------------------------------------------------------------------
// Pipelines. Each returns the completed column set for one sweep; run_experiment
// attaches metadata. All randomness is derived from (seed, sweep index, trial).
// ------------------------------------------------------------------------

namespace pipelines
{

inline void rank_vs_m(const std::map<std::string, double> &p, std::uint64_t seed, arma::uword threads,
                      ResultTable &t)
{
    (void)threads;
    double lambda = p.at("lambda");
    double dbar = p.at("dbar_over_lambda") * lambda;
    ClusterSet cluster{{{detail::deg2rad(p.at("theta_min_deg")), detail::deg2rad(p.at("theta_max_deg"))}}};

    t.columns = {"m", "rank", "bound"};
    t.data.assign(3, {});
    auto grid = detail::sweep_grid(p.at("m_start"), p.at("m_stop"), p.at("m_step"));
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        arma::uword M = detail::as_count(grid[i], "m grid value");
        ArrayGeometry geom = make_random_linear(M, dbar, lambda, derive_seed(seed, 21, i));
        RankReport rep = effective_rank(covariance_ula_analytic(geom, cluster), p.at("threshold"));
        t.data[0].push_back(double(M));
        t.data[1].push_back(double(rep.effective_rank));
        t.data[2].push_back(rank_bound_random(cluster, dbar, lambda, M));
    }
}

inline void pilot_decontamination(const std::map<std::string, double> &p, std::uint64_t seed,
                                  arma::uword threads, ResultTable &t)
{
    double lambda = p.at("lambda");
    double dbar = p.at("dbar_over_lambda") * lambda;
    arma::uword tau = detail::as_count(p.at("tau"), "tau");
    arma::uword trials = detail::as_count(p.at("trials"), "trials");
    arma::uword paths = detail::as_count(p.at("paths"), "paths");
    double noise_var = p.at("noise_var");
    bool ula = p.at("ula") != 0.0;

    ClusterSet c1{{{detail::deg2rad(p.at("theta1_min_deg")), detail::deg2rad(p.at("theta1_max_deg"))}}};
    ClusterSet c2{{{detail::deg2rad(p.at("theta2_min_deg")), detail::deg2rad(p.at("theta2_max_deg"))}}};
    PilotConfig pilot = make_pilot(tau, noise_var, derive_seed(seed, 40, 0));

    t.columns = {"m", "mse_mmse_db", "mse_mmse_nointerf_db", "mse_ls_db"};
    t.data.assign(4, {});

    auto grid = detail::sweep_grid(p.at("m_start"), p.at("m_stop"), p.at("m_step"));
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        arma::uword M = detail::as_count(grid[i], "m grid value");
        ArrayGeometry geom = ula ? make_ula(M, dbar, lambda)
                                 : make_random_linear(M, dbar, lambda, derive_seed(seed, 41, i));
        CovarianceMatrix R1 = covariance_ula_analytic(geom, c1);
        CovarianceMatrix R2 = covariance_ula_analytic(geom, c2);
        std::vector<CovarianceMatrix> both = {R1, R2};
        std::vector<CovarianceMatrix> only1 = {R1};

        std::vector<double> e_mmse(trials), e_ni(trials), e_ls(trials);
        std::uint64_t sweep_seed = derive_seed(seed, 42, i);
        run_parallel(trials, threads,
                     [&](arma::uword n)
                     {
                         ChannelRealization h1 =
                             draw_multipath_channel(geom, c1, paths, 1.0, derive_seed(sweep_seed, 1, n));
                         ChannelRealization h2 =
                             draw_multipath_channel(geom, c2, paths, 1.0, derive_seed(sweep_seed, 2, n));
                         std::uint64_t noise_seed = derive_seed(sweep_seed, 3, n);

                         arma::cx_mat Y = simulate_pilot_rx({h1, h2}, pilot, noise_seed);
                         arma::cx_mat Yni = simulate_pilot_rx({h1}, pilot, noise_seed);

                         double ref = std::pow(arma::norm(h1.h), 2);
                         auto ratio = [&](const arma::cx_vec &est)
                         { return std::pow(arma::norm(est - h1.h), 2) / ref; };

                         e_mmse[n] = ratio(mmse_estimate(Y, pilot, both).h_hat);
                         e_ni[n] = ratio(mmse_estimate(Yni, pilot, only1).h_hat);
                         e_ls[n] = ratio(ls_estimate(Y, pilot).h_hat);
                     });

        t.data[0].push_back(double(M));
        t.data[1].push_back(detail::db10(detail::mean_of(e_mmse)));
        t.data[2].push_back(detail::db10(detail::mean_of(e_ni)));
        t.data[3].push_back(detail::db10(detail::mean_of(e_ls)));
    }
}

// Shared by rank-vs-r and segment-rank: Monte Carlo covariance over scatterer
// redraws around a user at the origin, antennas fixed
inline void distributed_rank_sweep(const std::map<std::string, double> &p, std::uint64_t seed,
                                   arma::uword threads, bool segment, ResultTable &t)
{
    double lambda = p.at("lambda");
    double L = p.at("net_radius");
    arma::uword M = detail::as_count(p.at("m"), "m");
    arma::uword paths = detail::as_count(p.at("paths"), "paths");
    arma::uword T = detail::as_count(p.at("cov_draws"), "cov_draws");
    if (T == 0)
        T = 10 * M;
    PathLossModel no_loss;

    ArrayGeometry geom = make_disk_network(M, L, lambda, derive_seed(seed, 30, 0));
    arma::rowvec::fixed<2> origin = {0.0, 0.0};

    t.columns = {segment ? "lseg" : "r", "rank", "bound"};
    t.data.assign(3, {});

    auto grid = segment ? detail::sweep_grid(p.at("lseg_start"), p.at("lseg_stop"), p.at("lseg_step"))
                        : detail::sweep_grid(p.at("r_start"), p.at("r_stop"), p.at("r_step"));
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        double x = grid[i];
        std::uint64_t sweep_seed = derive_seed(seed, 31, i);
        auto sampler = [&](arma::uword n) -> arma::cx_vec
        {
            ScattererSet s = segment
                                 ? place_scatterers_segment(origin, x, paths, derive_seed(sweep_seed, 1, n))
                                 : place_scatterers_ring(origin, x, paths, derive_seed(sweep_seed, 2, n));
            return draw_one_ring_channel(geom, s, no_loss, derive_seed(sweep_seed, 3, n)).h;
        };
        RankReport rep = effective_rank(covariance_monte_carlo(sampler, T, threads), p.at("threshold"));
        t.data[0].push_back(x);
        t.data[1].push_back(double(rep.effective_rank));
        t.data[2].push_back(segment ? rank_bound_segment(x, lambda) : rank_bound_distributed(x, lambda));
    }
}

inline void path_correlation_sweep(const std::map<std::string, double> &p, std::uint64_t seed,
                                   arma::uword threads, ResultTable &t)
{
    (void)threads;
    double lambda = p.at("lambda");
    arma::uword M = detail::as_count(p.at("m"), "m");
    ArrayGeometry geom = make_disk_network(M, p.at("net_radius"), lambda, derive_seed(seed, 35, 0));
    PathLossModel no_loss;

    t.columns = {"d_over_lambda", "correlation", "bessel_abs"};
    t.data.assign(3, {});
    auto grid = detail::sweep_grid(0.0, p.at("d_stop_over_lambda"), p.at("d_step_over_lambda"));
    for (double dl : grid)
    {
        double D = dl * lambda;
        ChannelRealization h1 = draw_one_ring_channel(geom, detail::point_scatterer(-0.5 * D, 0.0), no_loss,
                                                      derive_seed(seed, 36, 0));
        ChannelRealization h2 = draw_one_ring_channel(geom, detail::point_scatterer(0.5 * D, 0.0), no_loss,
                                                      derive_seed(seed, 36, 1));
        t.data[0].push_back(dl);
        t.data[1].push_back(path_correlation(h1.h, h2.h));
        t.data[2].push_back(std::abs(bessel_j0(2.0 * pi * D / lambda)));
    }
}

inline void sigma_sq_sweep(const std::map<std::string, double> &p, ResultTable &t)
{
    t.columns = {"d", "sigma_sq"};
    t.data.assign(2, {});
    for (double d : detail::sweep_grid(p.at("d_start"), p.at("d_stop"), p.at("d_step")))
    {
        t.data[0].push_back(d);
        t.data[1].push_back(sigma_sq(d, p.at("net_radius"), p.at("r"), p.at("alpha"), p.at("gamma"), 2000,
                                     p.at("printed_alpha") != 0.0));
    }
}

inline void crosscorr_dist(const std::map<std::string, double> &p, std::uint64_t seed, arma::uword threads,
                           ResultTable &t)
{
    arma::uword samples = detail::as_count(p.at("samples"), "samples");
    PathLossModel loss{p.at("alpha"), p.at("gamma"), true};
    arma::vec v = crosscorr_limit_samples(detail::as_count(p.at("m"), "m"), p.at("net_radius"), p.at("r"),
                                          p.at("du"), p.at("lambda"), loss, samples, derive_seed(seed, 45, 0),
                                          threads);
    v = arma::sort(v);
    double mean = arma::mean(v);

    double ks = 0.0;
    arma::uword n = v.n_elem;
    t.columns = {"sample", "ecdf", "fitted_cdf"};
    t.data.assign(3, {});
    for (arma::uword i = 0; i < n; ++i)
    {
        double F = 1.0 - std::exp(-v(i) / mean);
        ks = std::max({ks, std::abs(F - double(i + 1) / double(n)), std::abs(F - double(i) / double(n))});
        t.data[0].push_back(v(i));
        t.data[1].push_back(double(i + 1) / double(n));
        t.data[2].push_back(F);
    }
    t.add_meta("sample_mean", format_double(mean));
    t.add_meta("ks_statistic", format_double(ks));
}

// Distributed two-user scenario shared by mse-vs-distance and sumrate-vs-distance
struct TwoUserSetup
{
    ArrayGeometry geom;
    PathLossModel loss;
    PilotConfig pilot;
    double noise_var = 0.0;
    arma::uword paths = 0, trials = 0, cov_draws = 0, cov_paths = 0;
    double r = 0.0;
};

inline TwoUserSetup two_user_setup(const std::map<std::string, double> &p, std::uint64_t seed)
{
    TwoUserSetup s;
    double L = p.at("net_radius");
    arma::uword M = detail::as_count(p.at("m"), "m");
    s.loss = PathLossModel{p.at("alpha"), p.at("gamma"), true};
    s.noise_var = detail::noise_from_edge_snr(p.at("snr_edge_db"), p.at("alpha"), L, p.at("r"), p.at("gamma"));
    s.pilot = make_pilot(detail::as_count(p.at("tau"), "tau"), s.noise_var, derive_seed(seed, 40, 0));
    s.geom = make_disk_network(M, L, p.at("lambda"), derive_seed(seed, 46, 0));
    s.paths = detail::as_count(p.at("paths"), "paths");
    s.trials = detail::as_count(p.at("trials"), "trials");
    s.cov_draws = detail::as_count(p.at("cov_draws"), "cov_draws");
    if (s.cov_draws == 0)
        s.cov_draws = 10 * M;
    s.cov_paths = detail::as_count(p.at("cov_paths"), "cov_paths");
    s.r = p.at("r");
    return s;
}

inline CovarianceMatrix user_covariance(const TwoUserSetup &s, const arma::rowvec::fixed<2> &user,
                                        std::uint64_t seed, arma::uword threads)
{
    auto sampler = [&](arma::uword n) -> arma::cx_vec
    {
        ScattererSet sc = place_scatterers_ring(user, s.r, s.cov_paths, derive_seed(seed, 1, n));
        return draw_one_ring_channel(s.geom, sc, s.loss, derive_seed(seed, 2, n)).h;
    };
    return covariance_monte_carlo(sampler, s.cov_draws, threads);
}

inline ChannelRealization user_channel(const TwoUserSetup &s, const arma::rowvec::fixed<2> &user,
                                       std::uint64_t seed)
{
    ScattererSet sc = place_scatterers_ring(user, s.r, s.paths, derive_seed(seed, 1, 0));
    return draw_one_ring_channel(s.geom, sc, s.loss, derive_seed(seed, 2, 0));
}

inline void mse_vs_distance(const std::map<std::string, double> &p, std::uint64_t seed, arma::uword threads,
                            ResultTable &t)
{
    TwoUserSetup s = two_user_setup(p, seed);
    arma::rowvec::fixed<2> user1 = {0.0, 0.0};

    t.columns = {"d", "mse_ls_db", "mse_mmse_db"};
    t.data.assign(3, {});

    auto grid = detail::sweep_grid(p.at("d_start"), p.at("d_stop"), p.at("d_step"));
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        arma::rowvec::fixed<2> user2 = {grid[i], 0.0};
        std::uint64_t sweep_seed = derive_seed(seed, 47, i);
        CovarianceMatrix R1 = user_covariance(s, user1, derive_seed(sweep_seed, 10, 0), threads);
        CovarianceMatrix R2 = user_covariance(s, user2, derive_seed(sweep_seed, 11, 0), threads);
        std::vector<CovarianceMatrix> both = {R1, R2};

        std::vector<double> e_ls(s.trials), e_mmse(s.trials);
        run_parallel(s.trials, threads,
                     [&](arma::uword n)
                     {
                         ChannelRealization h1 = user_channel(s, user1, derive_seed(sweep_seed, 20, n));
                         ChannelRealization h2 = user_channel(s, user2, derive_seed(sweep_seed, 21, n));
                         arma::cx_mat Y = simulate_pilot_rx({h1, h2}, s.pilot, derive_seed(sweep_seed, 22, n));

                         double ref = std::pow(arma::norm(h1.h), 2);
                         e_ls[n] = std::pow(arma::norm(ls_estimate(Y, s.pilot).h_hat - h1.h), 2) / ref;
                         e_mmse[n] = std::pow(arma::norm(mmse_estimate(Y, s.pilot, both).h_hat - h1.h), 2) / ref;
                     });

        t.data[0].push_back(grid[i]);
        t.data[1].push_back(detail::db10(detail::mean_of(e_ls)));
        t.data[2].push_back(detail::db10(detail::mean_of(e_mmse)));
    }
}

inline void sumrate_vs_distance(const std::map<std::string, double> &p, std::uint64_t seed,
                                arma::uword threads, ResultTable &t)
{
    TwoUserSetup s = two_user_setup(p, seed);
    arma::uword M = s.geom.n_antennas();
    double threshold = p.at("threshold");
    arma::uword m_cap = arma::uword(std::ceil(p.at("subspace_cap") * double(M)));
    arma::rowvec::fixed<2> user1 = {0.0, 0.0};

    t.columns = {"d", "rate_ls_mrc", "rate_mmse_mrc", "rate_mmse_mmse", "rate_subspace_mrc"};
    t.data.assign(5, {});

    auto grid = detail::sweep_grid(p.at("d_start"), p.at("d_stop"), p.at("d_step"));
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        arma::rowvec::fixed<2> user2 = {grid[i], 0.0};
        std::uint64_t sweep_seed = derive_seed(seed, 48, i);
        CovarianceMatrix R[2] = {user_covariance(s, user1, derive_seed(sweep_seed, 10, 0), threads),
                                 user_covariance(s, user2, derive_seed(sweep_seed, 11, 0), threads)};
        arma::cx_mat W[2] = {subspace_filter(R[1], threshold, m_cap),
                             subspace_filter(R[0], threshold, m_cap)};

        std::vector<double> rate_ls(s.trials), rate_mrc(s.trials), rate_mmse(s.trials), rate_sub(s.trials);
        run_parallel(s.trials, threads,
                     [&](arma::uword n)
                     {
                         ChannelRealization h[2] = {user_channel(s, user1, derive_seed(sweep_seed, 20, n)),
                                                    user_channel(s, user2, derive_seed(sweep_seed, 21, n))};
                         arma::cx_mat Y =
                             simulate_pilot_rx({h[0], h[1]}, s.pilot, derive_seed(sweep_seed, 22, n));

                         std::vector<double> s_ls, s_mrc, s_mmse, s_sub;
                         for (int k = 0; k < 2; ++k)
                         {
                             std::vector<ChannelRealization> order =
                                 k == 0 ? std::vector<ChannelRealization>{h[0], h[1]}
                                        : std::vector<ChannelRealization>{h[1], h[0]};
                             std::vector<CovarianceMatrix> covs = k == 0
                                                                      ? std::vector<CovarianceMatrix>{R[0], R[1]}
                                                                      : std::vector<CovarianceMatrix>{R[1], R[0]};

                             BeamformerWeights w_ls{ls_estimate(Y, s.pilot).h_hat.t(), "mrc_ls", 0};
                             arma::cx_vec h_mmse = mmse_estimate(Y, s.pilot, covs).h_hat;
                             BeamformerWeights w_mrc{h_mmse.t(), "mrc_mmse", 0};
                             BeamformerWeights w_bf = mmse_beamformer(h_mmse, covs[1], s.noise_var);
                             BeamformerWeights w_sub = subspace_mrc_receiver(W[k], Y, s.pilot);

                             s_ls.push_back(uplink_sinr(w_ls, order, s.noise_var));
                             s_mrc.push_back(uplink_sinr(w_mrc, order, s.noise_var));
                             s_mmse.push_back(uplink_sinr(w_bf, order, s.noise_var));
                             s_sub.push_back(uplink_sinr(w_sub, order, s.noise_var));
                         }
                         rate_ls[n] = sum_rate(s_ls);
                         rate_mrc[n] = sum_rate(s_mrc);
                         rate_mmse[n] = sum_rate(s_mmse);
                         rate_sub[n] = sum_rate(s_sub);
                     });

        t.data[0].push_back(grid[i]);
        t.data[1].push_back(detail::mean_of(rate_ls));
        t.data[2].push_back(detail::mean_of(rate_mrc));
        t.data[3].push_back(detail::mean_of(rate_mmse));
        t.data[4].push_back(detail::mean_of(rate_sub));
    }
}

inline void percell_rate_vs_r(const std::map<std::string, double> &p, std::uint64_t seed,
                              arma::uword threads, ResultTable &t)
{
    double lambda = p.at("lambda");
    double L = p.at("cell_radius");
    arma::uword M = detail::as_count(p.at("m"), "m");
    arma::uword paths = detail::as_count(p.at("paths"), "paths");
    arma::uword trials = detail::as_count(p.at("trials"), "trials");
    arma::uword cov_paths = detail::as_count(p.at("cov_paths"), "cov_paths");
    arma::uword T = detail::as_count(p.at("cov_draws"), "cov_draws");
    if (T == 0)
        T = 10 * M;
    double threshold = p.at("threshold");
    arma::uword m_cap = arma::uword(std::ceil(p.at("subspace_cap") * double(M)));
    PathLossModel loss{p.at("alpha"), p.at("gamma"), true};
    double noise_var = detail::noise_from_edge_snr(p.at("snr_edge_db"), p.at("alpha"), L, p.at("r_start"), p.at("gamma"));
    PilotConfig pilot = make_pilot(detail::as_count(p.at("tau"), "tau"), noise_var, derive_seed(seed, 40, 0));

    t.columns = {"r", "rate_ls_mrc", "rate_mmse_mmse", "rate_subspace_mrc"};
    t.data.assign(4, {});

    auto grid = detail::sweep_grid(p.at("r_start"), p.at("r_stop"), p.at("r_step"));
    const arma::uword B = 7;
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        double r = grid[i];
        std::uint64_t sweep_seed = derive_seed(seed, 49, i);
        MultiCellScenario net = make_hex_network(L, M, lambda, r, paths, derive_seed(sweep_seed, 5, 0));

        // covariance of user k at base station b, expectation over ring redraws
        std::vector<std::vector<CovarianceMatrix>> Rkb(B, std::vector<CovarianceMatrix>(B));
        for (arma::uword b = 0; b < B; ++b)
            for (arma::uword k = 0; k < B; ++k)
            {
                std::uint64_t cs = derive_seed(sweep_seed, 6, b * B + k);
                auto sampler = [&](arma::uword n) -> arma::cx_vec
                {
                    ScattererSet sc =
                        place_scatterers_ring(net.cells[k].user, r, cov_paths, derive_seed(cs, 1, n));
                    return draw_one_ring_channel(net.cells[b].array, sc, loss, derive_seed(cs, 2, n)).h;
                };
                Rkb[b][k] = covariance_monte_carlo(sampler, T, threads);
            }

        std::vector<arma::cx_mat> Wb(B);
        std::vector<CovarianceMatrix> Rint(B);
        for (arma::uword b = 0; b < B; ++b)
        {
            Rint[b].R.zeros(M, M);
            for (arma::uword k = 0; k < B; ++k)
                if (k != b)
                    Rint[b].R += Rkb[b][k].R;
            Wb[b] = subspace_filter(Rint[b], threshold, m_cap);
        }

        std::vector<double> rate_ls(trials), rate_mmse(trials), rate_sub(trials);
        run_parallel(trials, threads,
                     [&](arma::uword n)
                     {
                         std::uint64_t ts = derive_seed(sweep_seed, 7, n);

                         // user k's ring this trial, shared across serving cells
                         std::vector<ScattererSet> rings(B);
                         for (arma::uword k = 0; k < B; ++k)
                             rings[k] = place_scatterers_ring(net.cells[k].user, r, paths,
                                                              derive_seed(ts, 1, k));

                         double s_ls = 0.0, s_mmse = 0.0, s_sub = 0.0;
                         for (arma::uword b = 0; b < B; ++b)
                         {
                             std::vector<ChannelRealization> ch(B);
                             for (arma::uword k = 0; k < B; ++k)
                                 ch[k] = draw_one_ring_channel(net.cells[b].array, rings[k], loss,
                                                               derive_seed(ts, 2, b * B + k));

                             // user b is served by cell b; rotate it to the front
                             std::vector<ChannelRealization> order;
                             std::vector<CovarianceMatrix> covs;
                             order.push_back(ch[b]);
                             covs.push_back(Rkb[b][b]);
                             for (arma::uword k = 0; k < B; ++k)
                                 if (k != b)
                                 {
                                     order.push_back(ch[k]);
                                     covs.push_back(Rkb[b][k]);
                                 }

                             arma::cx_mat Y = simulate_pilot_rx(order, pilot, derive_seed(ts, 3, b));

                             BeamformerWeights w_ls{ls_estimate(Y, pilot).h_hat.t(), "mrc_ls", 0};
                             arma::cx_vec h_mmse = mmse_estimate(Y, pilot, covs).h_hat;
                             BeamformerWeights w_bf = mmse_beamformer(h_mmse, Rint[b], noise_var);
                             BeamformerWeights w_sub = subspace_mrc_receiver(Wb[b], Y, pilot);

                             s_ls += std::log2(1.0 + uplink_sinr(w_ls, order, noise_var));
                             s_mmse += std::log2(1.0 + uplink_sinr(w_bf, order, noise_var));
                             s_sub += std::log2(1.0 + uplink_sinr(w_sub, order, noise_var));
                         }
                         rate_ls[n] = s_ls / double(B);
                         rate_mmse[n] = s_mmse / double(B);
                         rate_sub[n] = s_sub / double(B);
                     });

        t.data[0].push_back(r);
        t.data[1].push_back(detail::mean_of(rate_ls));
        t.data[2].push_back(detail::mean_of(rate_mmse));
        t.data[3].push_back(detail::mean_of(rate_sub));
    }
}

} // namespace pipelines

inline ResultTable run_experiment(const ExperimentConfig &cfg)
{
    const ExperimentInfo &info = find_experiment(cfg.experiment);
    std::map<std::string, double> p = detail::resolve_params(cfg, info);

    // resolve the run-time defaults so the metadata has no hidden values
    if (p.count("cov_draws") && p.at("cov_draws") == 0.0 && p.count("m"))
        p["cov_draws"] = 10.0 * p.at("m");

    auto start = std::chrono::steady_clock::now();
    ResultTable t;

    if (info.name == "rank-vs-m")
        pipelines::rank_vs_m(p, cfg.seed, cfg.threads, t);
    else if (info.name == "pilot-decontamination")
        pipelines::pilot_decontamination(p, cfg.seed, cfg.threads, t);
    else if (info.name == "rank-vs-r")
        pipelines::distributed_rank_sweep(p, cfg.seed, cfg.threads, false, t);
    else if (info.name == "segment-rank")
        pipelines::distributed_rank_sweep(p, cfg.seed, cfg.threads, true, t);
    else if (info.name == "path-correlation")
        pipelines::path_correlation_sweep(p, cfg.seed, cfg.threads, t);
    else if (info.name == "sigma-sq")
        pipelines::sigma_sq_sweep(p, t);
    else if (info.name == "crosscorr-dist")
        pipelines::crosscorr_dist(p, cfg.seed, cfg.threads, t);
    else if (info.name == "mse-vs-distance")
        pipelines::mse_vs_distance(p, cfg.seed, cfg.threads, t);
    else if (info.name == "sumrate-vs-distance")
        pipelines::sumrate_vs_distance(p, cfg.seed, cfg.threads, t);
    else
        pipelines::percell_rate_vs_r(p, cfg.seed, cfg.threads, t);

    t.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::vector<std::pair<std::string, std::string>> head;
    head.emplace_back("experiment", info.name);
    head.emplace_back("version", version_string);
    head.emplace_back("seed", std::to_string(cfg.seed));
    for (const auto &kv : p)
        head.emplace_back(kv.first, format_double(kv.second));
    t.metadata.insert(t.metadata.begin(), head.begin(), head.end());
    return t;
}

} // namespace lsmimo

#endif

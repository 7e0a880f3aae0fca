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

// Command line front end: run <config> [--out PATH] [--seed N] [--threads K],
// list, selftest. Exit codes: 0 ok, 1 config or usage error, 2 runtime error.

#include <charconv>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <lsmimo/lsmimo.hpp>

namespace
{

// Shortest round-trip representation, for human facing listings.
std::string brief_double(double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

arma::uword default_threads()
{
    const char *env = std::getenv("LSMIMO_THREADS");
    if (env == nullptr)
        return 1;
    long v = std::atol(env);
    return v > 0 ? arma::uword(v) : 1;
}

int cmd_list()
{
    std::cout << lsmimo::version_string << " experiments:\n\n";
    for (const auto &info : lsmimo::experiment_registry())
    {
        std::cout << "  " << info.name << "\n      " << info.summary << "\n      required:";
        for (const auto &k : info.required)
            std::cout << " " << k;
        std::cout << "\n      optional:";
        for (const auto &d : info.defaults)
            std::cout << " " << d.first << "=" << brief_double(d.second);
        std::cout << "\n";
    }
    return 0;
}

int cmd_run(const std::string &config_path, const std::string &out_path, long long seed_override,
            long long threads_override)
{
    lsmimo::ExperimentConfig cfg = lsmimo::load_config(config_path);
    if (seed_override >= 0)
        cfg.seed = std::uint64_t(seed_override);
    cfg.threads = threads_override > 0 ? arma::uword(threads_override) : default_threads();

    lsmimo::ResultTable table = lsmimo::run_experiment(cfg);
    if (out_path.empty())
        lsmimo::write_csv(table, std::cout);
    else
    {
        lsmimo::write_csv(table, out_path);
        std::cerr << "wrote " << table.n_rows() << " rows to " << out_path << " ("
                  << std::setprecision(3) << table.runtime_seconds << " s)\n";
    }
    return 0;
}

// Fast end-to-end checks that need no config files; meant as an install probe.
int cmd_selftest()
{
    using namespace lsmimo;
    int failures = 0;
    auto check = [&](const char *name, bool ok)
    {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok)
            ++failures;
    };

    ArrayGeometry ula = make_ula(64, 0.075, 0.15);
    ClusterSet cl{{{70.0 * pi / 180.0, 110.0 * pi / 180.0}}};
    RankReport rep = effective_rank(covariance_ula_analytic(ula, cl), 1e-5);
    rep.bound = rank_bound_ula(cl, 0.075, 0.15, 64);
    check("ula covariance is rank deficient", rep.effective_rank < 64);
    check("ula rank close to closed form", std::abs(double(rep.effective_rank) - rep.bound) <= 10.0);

    check("bessel j0 at 0", std::abs(bessel_j0(0.0) - 1.0) < 1e-14);
    check("bessel j0 at first zero", std::abs(bessel_j0(2.4048255576957724)) < 1e-12);

    Rng rng(42);
    double acc = 0.0;
    for (int i = 0; i < 10000; ++i)
        acc += rng.uniform();
    check("uniform rng mean", std::abs(acc / 10000.0 - 0.5) < 0.02);

    QuadratureResult q = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi);
    check("adaptive quadrature sin", q.converged && std::abs(q.value - 2.0) < 1e-10);

    arma::cx_mat A(12, 6, arma::fill::randu);
    arma::cx_mat Ap = pseudo_inverse(A);
    check("pseudo inverse identity", arma::norm(A * Ap * A - A, "fro") < 1e-10 * arma::norm(A, "fro"));

    ExperimentConfig cfg;
    cfg.experiment = "path-correlation";
    cfg.params = {{"m", 32}, {"d_stop_over_lambda", 1.0}, {"d_step_over_lambda", 0.25}};
    cfg.seed = 7;
    ResultTable t = run_experiment(cfg);
    check("experiment pipeline produces rows", t.n_rows() == 5);
    check("zero spacing gives unit correlation", std::abs(t.data[1][0] - 1.0) < 1e-12);

    std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"lsmimo experiment driver"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(lsmimo::version_string));

    std::string config_path, out_path;
    long long seed_override = -1, threads_override = 0;

    CLI::App *run = app.add_subcommand("run", "run an experiment described by a config file");
    run->add_option("config", config_path, "key = value config file")->required();
    run->add_option("--out", out_path, "write CSV here instead of stdout");
    run->add_option("--seed", seed_override, "override the config seed");
    run->add_option("--threads", threads_override, "worker threads (default LSMIMO_THREADS or 1)");

    CLI::App *list = app.add_subcommand("list", "list available experiments");
    CLI::App *selftest = app.add_subcommand("selftest", "run quick built-in checks");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try
    {
        if (list->parsed())
            return cmd_list();
        if (selftest->parsed())
            return cmd_selftest();
        return cmd_run(config_path, out_path, seed_override, threads_override);
    }
    catch (const lsmimo::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

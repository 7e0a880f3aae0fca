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

#ifndef lsmimo_common_H
#define lsmimo_common_H

#include <armadillo>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lsmimo
{

inline constexpr const char *version_string = "lsmimo 0.1.0";

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Deterministic reduction. Summation order is fixed by the recursion, not by the
// order in which elements were produced, so parallel producers stay reproducible.
template <typename T>
inline T pairwise_sum(const std::vector<T> &v, std::size_t lo, std::size_t hi)
{
    if (hi <= lo)
        return T(0);
    if (hi - lo <= 8)
    {
        T acc = v[lo];
        for (std::size_t i = lo + 1; i < hi; ++i)
            acc += v[i];
        return acc;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

template <typename T>
inline T pairwise_sum(const std::vector<T> &v)
{
    return pairwise_sum(v, 0, v.size());
}

// Runs fn(0..n_items-1) on up to n_threads workers. Each index owns its output
// slot, so results are identical for any thread count. First exception rethrown.
template <typename Fn>
inline void run_parallel(arma::uword n_items, arma::uword n_threads, Fn &&fn)
{
    if (n_threads <= 1 || n_items <= 1)
    {
        for (arma::uword i = 0; i < n_items; ++i)
            fn(i);
        return;
    }

    if (n_threads > n_items)
        n_threads = n_items;

    std::atomic<arma::uword> next(0);
    std::exception_ptr first_error = nullptr;
    std::mutex error_lock;

    auto worker = [&]()
    {
        for (;;)
        {
            arma::uword i = next.fetch_add(1);
            if (i >= n_items)
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> guard(error_lock);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (arma::uword t = 0; t < n_threads; ++t)
        pool.emplace_back(worker);
    for (auto &th : pool)
        th.join();

    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace lsmimo

#endif

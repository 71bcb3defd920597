// SPDX-License-Identifier: Apache-2.0
//
// mmrelay - mixed-resolution multipair massive MIMO relaying laboratory
// Copyright (C) 2026 The mmrelay authors
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

#pragma once

// Brute-force reference solvers used to check the optimizers: random
// standard-form GP instances with a dense log-grid search, and a direct
// search over the power split for a single user pair.

#include "mmrelay/alloc.hpp"
#include "mmrelay/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace mmrelay::oracle
{

struct RandomGp
{
    GpProblem problem;
    double lo = 1e-2; // box on every variable
    double hi = 1e2;
};

// Random feasible GP: box constraints lo <= x_j <= hi, a few random
// posynomial constraints that hold strictly at x = 1, and a random
// posynomial objective with mixed-sign exponents.
inline RandomGp random_gp(std::uint64_t seed, int n)
{
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> expo(-2.0, 2.0), logc(-1.0, 1.0), slack(0.3, 0.9);
    std::uniform_int_distribution<int> nterms(1, 3), ncons(1, 3);
    RandomGp r;
    auto &gp = r.problem;
    gp.n_vars = n;

    auto random_posy = [&](int terms) {
        Posynomial p(n);
        for (int t = 0; t < terms; ++t)
        {
            std::vector<double> e(static_cast<std::size_t>(n));
            for (auto &a : e)
                a = std::round(expo(eng) * 4.0) / 4.0;
            p.add(std::pow(10.0, logc(eng)), e);
        }
        return p;
    };

    gp.objective = random_posy(nterms(eng) + 1);
    for (int j = 0; j < n; ++j)
    {
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        e[j] = 1.0;
        gp.add_constraint(monomial(n, 1.0 / r.hi, e), "upper bound x" + std::to_string(j));
        e[j] = -1.0;
        gp.add_constraint(monomial(n, r.lo, e), "lower bound x" + std::to_string(j));
    }
    const int m = ncons(eng);
    for (int i = 0; i < m; ++i)
    {
        auto p = random_posy(nterms(eng));
        const double at_one = p(std::vector<double>(static_cast<std::size_t>(n), 1.0));
        gp.add_constraint(p.times({slack(eng) / at_one, std::vector<double>(static_cast<std::size_t>(n), 0.0)}),
                          "random constraint " + std::to_string(i));
    }
    return r;
}

inline bool gp_feasible(const GpProblem &gp, const std::vector<double> &x, double tol = 1e-9)
{
    for (const auto &c : gp.constraints)
        if (!(c(x) <= 1.0 + tol))
            return false;
    return true;
}

struct GridResult
{
    std::vector<double> x;
    double objective = std::numeric_limits<double>::infinity();
    long evaluations = 0;
};

namespace detail
{
// Exhaustive search over a product grid in log space; axes not listed in
// `axes` stay at `base`.
inline void grid_pass(const GpProblem &gp, const std::vector<int> &axes, const std::vector<double> &log_lo,
                      const std::vector<double> &log_hi, int points, std::vector<double> base, GridResult &best)
{
    const int d = static_cast<int>(axes.size());
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    while (true)
    {
        for (int a = 0; a < d; ++a)
        {
            const int j = axes[a];
            const double f = points > 1 ? double(idx[a]) / (points - 1) : 0.5;
            base[j] = std::exp(log_lo[j] + f * (log_hi[j] - log_lo[j]));
        }
        ++best.evaluations;
        if (gp_feasible(gp, base, 0.0))
        {
            const double v = gp.objective(base);
            if (v < best.objective)
            {
                best.objective = v;
                best.x = base;
            }
        }
        int a = 0;
        while (a < d && ++idx[a] == points)
            idx[a++] = 0;
        if (a == d)
            break;
    }
}
} // namespace detail

// Dense log-grid search over the box: a full grid with at most ~2e5 points,
// then shrinking-window refinement around the incumbent. Each round searches
// a full product grid and a 100 x 100 grid over every pair of variables
// inside the window; the window halves whenever a round finds nothing
// better. Pair grids through `through` (typically a solver's answer) are
// searched first when given.
inline GridResult grid_search_gp(const RandomGp &r, const std::vector<double> *through = nullptr)
{
    const auto &gp = r.problem;
    const int n = gp.n_vars;
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        all[j] = j;
    const double llo = std::log(r.lo), lhi = std::log(r.hi);
    std::vector<double> lo(static_cast<std::size_t>(n), llo), hi(static_cast<std::size_t>(n), lhi);
    const int points = n <= 2 ? 100 : std::max(8, static_cast<int>(std::floor(std::pow(2e5, 1.0 / n))));

    GridResult best;
    std::vector<double> base(static_cast<std::size_t>(n), 1.0);
    detail::grid_pass(gp, all, lo, hi, points, base, best);

    if (through && n > 2)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                detail::grid_pass(gp, {i, j}, lo, hi, 100, *through, best);

    double half = (lhi - llo) / 8.0;
    for (int round = 0; round < 200 && half > 1e-10 && !best.x.empty(); ++round)
    {
        const double before = best.objective;
        std::vector<double> zlo(lo), zhi(hi);
        for (int j = 0; j < n; ++j)
        {
            const double c = std::log(best.x[j]);
            zlo[j] = std::max(llo, c - half);
            zhi[j] = std::min(lhi, c + half);
        }
        detail::grid_pass(gp, all, zlo, zhi, n <= 2 ? points : 7, best.x, best);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                detail::grid_pass(gp, {i, j}, zlo, zhi, 100, best.x, best);
        if (!(best.objective < before * (1.0 - 1e-12)))
            half /= 2.0;
    }
    return best;
}

struct PairSearchResult
{
    double p_S = 0.0;
    double p_R = 0.0;
    double sum_rate = 0.0;
};

// Single-pair optimum by brute force: a 2-D grid over the feasible triangle
// p_S + p_R <= P_T, then a fine scan and golden-section refinement along the
// budget line where the rate, increasing in both powers, peaks.
inline PairSearchResult single_pair_search(const LargeScaleProfile &profile, const SystemConfig &cfg, double P_T,
                                           int grid = 200)
{
    if (cfg.K() != 1)
        throw std::invalid_argument("single_pair_search: needs exactly one pair");
    const auto inst = build_cgp(profile, cfg, P_T);
    const double pl = prelog(cfg);
    auto rate = [&](double ps, double pr) { return sum_rate_from_sinr(allocation_sinr(inst, {ps}, pr), pl); };

    PairSearchResult best;
    auto consider = [&](double ps, double pr) {
        const double r = rate(ps, pr);
        if (r > best.sum_rate)
            best = {ps, pr, r};
    };
    for (int i = 1; i <= grid; ++i)
        for (int j = 1; i + j <= grid; ++j)
            consider(P_T * i / grid, P_T * j / grid);

    auto on_line = [&](double f) { return rate(f * P_T, (1.0 - f) * P_T); };
    const int scan = 10000;
    int arg = 1;
    double top = -1.0;
    for (int i = 1; i < scan; ++i)
    {
        const double r = on_line(double(i) / scan);
        if (r > top)
        {
            top = r;
            arg = i;
        }
    }
    double a = double(arg - 1) / scan, b = double(arg + 1) / scan;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it)
    {
        if (on_line(c) > on_line(d))
            b = d;
        else
            a = c;
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    const double f = 0.5 * (a + b);
    consider(f * P_T, (1.0 - f) * P_T);
    return best;
}

} // namespace mmrelay::oracle

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

// Sum-rate maximizing power allocation. The SINR of pair k is
// nu_k = p_S,k / xi_k(p_S, p_R) with a posynomial xi_k, so
//
//   maximize prod_k (1 + nu_k)
//   s.t.     nu_k p_S,k^-1 xi_k <= 1,  sum_k p_S,k + p_R <= P_T
//
// is a complementary GP. Each outer iteration condenses 1 + nu_k around the
// current SINRs into the monomial (1 + nu~_k)(nu_k / nu~_k)^delta_k,
// delta_k = nu~_k / (1 + nu~_k), adds the trust region
// nu~_k / theta <= nu_k <= theta nu~_k, and solves the resulting GP.

#include "mmrelay/gp.hpp"
#include "mmrelay/rate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace mmrelay
{

// Variable layout of the allocation problem: p_S,0..K-1, p_R, nu_0..K-1.
struct AllocationLayout
{
    int K = 0;
    int n_vars() const { return 2 * K + 1; }
    int p_S(int k) const { return k; }
    int p_R() const { return K; }
    int nu(int k) const { return K + 1 + k; }
};

// The parts of the complementary GP that do not change between iterations.
struct CgpInstance
{
    AllocationLayout layout;
    double P_T = 0.0;
    CompactCoefficients coeff;
    std::vector<Posynomial> xi;       // xi_k over all variables (p_S, p_R part only)
    std::vector<Posynomial> coupling; // nu_k p_S,k^-1 xi_k <= 1
    Posynomial budget;                // (sum p_S + p_R) / P_T <= 1
};

inline CgpInstance build_cgp(const LargeScaleProfile &profile, const SystemConfig &cfg, double P_T)
{
    if (!(P_T > 0.0) || !std::isfinite(P_T))
        throw std::invalid_argument("build_cgp: total power budget must be positive");
    CgpInstance inst;
    const int K = cfg.K();
    inst.layout.K = K;
    inst.P_T = P_T;
    inst.coeff = compact_coefficients(profile, cfg, RateForm::exact);
    const auto &L = inst.layout;
    const int n = L.n_vars();
    auto unit = [n](std::initializer_list<std::pair<int, double>> e) {
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        for (auto [j, a] : e)
            v[j] += a;
        return v;
    };

    for (int k = 0; k < K; ++k)
    {
        Posynomial xi(n);
        for (int i = 0; i < K; ++i)
            xi.add(inst.coeff.a_at(k, i), unit({{L.p_S(i), 1.0}}));
        for (int i = 0; i < K; ++i)
            xi.add(inst.coeff.b_at(k, i), unit({{L.p_S(i), 1.0}, {L.p_R(), -1.0}}));
        xi.add(inst.coeff.c[k], unit({{L.p_R(), -1.0}}));
        xi.add(inst.coeff.d[k], unit({}));
        inst.coupling.push_back(xi.times({1.0, unit({{L.nu(k), 1.0}, {L.p_S(k), -1.0}})}));
        inst.xi.push_back(std::move(xi));
    }
    inst.budget = Posynomial(n);
    for (int k = 0; k < K; ++k)
        inst.budget.add(1.0 / P_T, unit({{L.p_S(k), 1.0}}));
    inst.budget.add(1.0 / P_T, unit({{L.p_R(), 1.0}}));
    return inst;
}

// Exact SINRs at arbitrary powers, via the compact coefficients.
inline std::vector<double> allocation_sinr(const CgpInstance &inst, const std::vector<double> &p_S, double p_R)
{
    const auto xi = compact_xi(inst.coeff, p_S, p_R);
    std::vector<double> nu(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k)
        nu[k] = p_S[k] / xi[k];
    return nu;
}

inline double sum_rate_from_sinr(const std::vector<double> &nu, double pre_log)
{
    std::vector<long double> r(nu.size());
    for (std::size_t k = 0; k < nu.size(); ++k)
        r[k] = pre_log * std::log1p(nu[k]) / std::numbers::ln2;
    return static_cast<double>(pairwise_sum(r));
}

// GP of one outer iteration around the SINRs nu_ref.
inline GpProblem condensed_gp(const CgpInstance &inst, const std::vector<double> &nu_ref, double theta)
{
    const auto &L = inst.layout;
    const int n = L.n_vars();
    GpProblem gp;
    gp.n_vars = n;
    std::vector<double> obj(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < L.K; ++k)
        obj[L.nu(k)] = -nu_ref[k] / (1.0 + nu_ref[k]);
    gp.objective = monomial(n, 1.0, obj);
    for (int k = 0; k < L.K; ++k)
        gp.add_constraint(inst.coupling[k], "sinr coupling of pair " + std::to_string(k));
    gp.add_constraint(inst.budget, "total power budget");
    for (int k = 0; k < L.K; ++k)
    {
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        e[L.nu(k)] = 1.0;
        gp.add_constraint(monomial(n, 1.0 / (theta * nu_ref[k]), e), "trust region upper, pair " + std::to_string(k));
        e[L.nu(k)] = -1.0;
        gp.add_constraint(monomial(n, nu_ref[k] / theta, e), "trust region lower, pair " + std::to_string(k));
    }
    return gp;
}

struct AllocationStep
{
    int iteration = 0;
    std::vector<double> p_S;
    double p_R = 0.0;
    std::vector<double> nu;      // GP solution
    std::vector<double> nu_true; // exact SINRs at the new powers
    double sum_rate = 0.0;       // from nu_true
    double surrogate = 0.0;      // prod nu^-delta at the GP solution
    double max_step = 0.0;       // max_k |nu_true,k - nu~_k|
    double gp_gap = 0.0;
};

struct AllocationResult
{
    std::vector<double> p_S;
    double p_R = 0.0;
    std::vector<double> nu;
    double sum_rate = 0.0;
    double initial_sum_rate = 0.0;
    std::vector<AllocationStep> trace;
    bool converged = false;
    int iterations = 0;
};

class NonMonotone : public std::runtime_error
{
  public:
    NonMonotone(int iteration, double before, double after)
        : std::runtime_error("allocation: sum rate decreased at iteration " + std::to_string(iteration) + " (" +
                             std::to_string(before) + " -> " + std::to_string(after) + ")")
    {
    }
};

struct AllocationOptions
{
    double theta = 1.1;
    double eps = 1e-4;
    int max_iter = 50;
    double gp_tol = 1e-12;
    // Starting powers; default p_S,k = P_T / (2K), p_R = P_T / 2.
    std::optional<std::vector<double>> init_p_S;
    std::optional<double> init_p_R;
};

inline AllocationResult uniform_allocation(const LargeScaleProfile &profile, const SystemConfig &cfg, double P_T)
{
    const auto inst = build_cgp(profile, cfg, P_T);
    AllocationResult r;
    const int K = cfg.K();
    r.p_S.assign(static_cast<std::size_t>(K), P_T / (2.0 * K));
    r.p_R = P_T / 2.0;
    r.nu = allocation_sinr(inst, r.p_S, r.p_R);
    r.sum_rate = sum_rate_from_sinr(r.nu, prelog(cfg));
    r.initial_sum_rate = r.sum_rate;
    r.converged = true;
    return r;
}

inline AllocationResult allocate(const LargeScaleProfile &profile, const SystemConfig &cfg, double P_T,
                                 const AllocationOptions &opt = {})
{
    if (!(opt.theta > 1.0))
        throw std::invalid_argument("allocate: theta must exceed 1");
    if (!(opt.eps > 0.0))
        throw std::invalid_argument("allocate: eps must be positive");
    if (opt.max_iter < 1)
        throw std::invalid_argument("allocate: max_iter must be at least 1");
    const auto inst = build_cgp(profile, cfg, P_T);
    const auto &L = inst.layout;
    const int K = L.K;
    const double pl = prelog(cfg);

    std::vector<double> p_S = opt.init_p_S.value_or(std::vector<double>(static_cast<std::size_t>(K), P_T / (2.0 * K)));
    double p_R = opt.init_p_R.value_or(P_T / 2.0);
    if (static_cast<int>(p_S.size()) != K)
        throw std::invalid_argument("allocate: initial source powers have wrong length");
    for (double p : p_S)
        if (!(p > 0.0))
            throw std::invalid_argument("allocate: initial powers must be positive");
    if (!(p_R > 0.0))
        throw std::invalid_argument("allocate: initial relay power must be positive");

    std::vector<double> nu_ref = allocation_sinr(inst, p_S, p_R);
    double rate = sum_rate_from_sinr(nu_ref, pl);

    AllocationResult res;
    res.initial_sum_rate = rate;
    res.p_S = p_S;
    res.p_R = p_R;
    res.nu = nu_ref;
    res.sum_rate = rate;

    for (int j = 1; j <= opt.max_iter; ++j)
    {
        const auto gp = condensed_gp(inst, nu_ref, opt.theta);
        GpOptions go;
        go.tol = opt.gp_tol;
        // Strictly feasible warm start: shrink the powers slightly and place
        // each SINR just below its exact value there, so no phase I is needed.
        std::vector<double> x0(static_cast<std::size_t>(L.n_vars()));
        {
            constexpr double shrink = 0.999;
            std::vector<double> ps(p_S);
            for (double &v : ps)
                v *= shrink;
            const auto nu0 = allocation_sinr(inst, ps, p_R * shrink);
            for (int k = 0; k < K; ++k)
            {
                x0[L.p_S(k)] = ps[k];
                x0[L.nu(k)] = std::clamp(nu0[k] * shrink, nu_ref[k] / opt.theta * 1.0001, nu_ref[k] * opt.theta / 1.0001);
            }
            x0[L.p_R()] = p_R * shrink;
        }
        go.x0 = x0;
        const auto sol = solve_gp(gp, go);

        AllocationStep step;
        step.iteration = j;
        for (int k = 0; k < K; ++k)
        {
            step.p_S.push_back(sol.x[L.p_S(k)]);
            step.nu.push_back(sol.x[L.nu(k)]);
        }
        step.p_R = sol.x[L.p_R()];
        step.nu_true = allocation_sinr(inst, step.p_S, step.p_R);
        step.sum_rate = sum_rate_from_sinr(step.nu_true, pl);
        step.surrogate = sol.objective;
        step.gp_gap = sol.gap;
        for (int k = 0; k < K; ++k)
            step.max_step = std::max(step.max_step, std::abs(step.nu_true[k] - nu_ref[k]));
        res.trace.push_back(step);
        res.iterations = j;

        if (step.sum_rate < rate - 1e-9 * std::max(1.0, std::abs(rate)))
            throw NonMonotone(j, rate, step.sum_rate);

        p_S = step.p_S;
        p_R = step.p_R;
        nu_ref = step.nu_true;
        rate = step.sum_rate;
        res.p_S = p_S;
        res.p_R = p_R;
        res.nu = step.nu;
        res.sum_rate = rate;
        if (step.max_step < opt.eps)
        {
            res.converged = true;
            break;
        }
    }
    return res;
}

// CSV: iteration, p_S_0..p_S_{K-1}, p_R, nu_0..nu_{K-1}, sum_rate. Row 0 is the start point.
inline void write_allocation_trace_csv(std::ostream &os, const AllocationResult &r)
{
    const auto K = r.p_S.size();
    const auto old = os.precision(9);
    os << "iteration";
    for (std::size_t k = 0; k < K; ++k)
        os << ",p_S_" << k;
    os << ",p_R";
    for (std::size_t k = 0; k < K; ++k)
        os << ",nu_" << k;
    os << ",sum_rate\n";
    for (const auto &s : r.trace)
    {
        os << s.iteration;
        for (double p : s.p_S)
            os << ',' << p;
        os << ',' << s.p_R;
        for (double v : s.nu)
            os << ',' << v;
        os << ',' << s.sum_rate << '\n';
    }
    os.precision(old);
}

} // namespace mmrelay

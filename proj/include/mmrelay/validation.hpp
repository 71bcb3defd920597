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

// Self-contained numerical checks of the whole laboratory: Monte Carlo
// against closed forms, the two closed forms against each other, limits,
// optimizer against brute force, and the power model. Each check returns a
// verdict with a one-line summary of its worst case.

#include "mmrelay/alloc.hpp"
#include "mmrelay/channel.hpp"
#include "mmrelay/energy.hpp"
#include "mmrelay/gp.hpp"
#include "mmrelay/mcsim.hpp"
#include "mmrelay/model.hpp"
#include "mmrelay/oracle.hpp"
#include "mmrelay/rate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mmrelay::validation
{

inline double rel_diff(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Gains drawn uniformly from [lo, hi] on both hops.
inline LargeScaleProfile uniform_gains(std::uint64_t seed, int K, double lo = 0.3, double hi = 1.5)
{
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> sr(static_cast<std::size_t>(K)), rd(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
    {
        sr[k] = u(eng);
        rd[k] = u(eng);
    }
    return LargeScaleProfile::from_gains(sr, rd);
}

struct Scenario
{
    SystemConfig cfg;
    LargeScaleProfile profile;
};

// Random configuration spanning the parameter space: M in 1..512, K in
// 1..12, resolution 1..8 bits or unquantized, powers in [-20, 30] dB,
// gains in [1e-6, 1] (log-uniform).
inline Scenario random_scenario(std::uint64_t seed)
{
    std::mt19937_64 eng(seed);
    std::uniform_int_distribution<int> Md(1, 512), Kd(1, 12), bd(0, 8);
    std::uniform_real_distribution<double> kd(0.0, 1.0), pd(-20.0, 30.0);
    const int M = Md(eng);
    const int K = Kd(eng);
    const int bi = bd(eng);
    const Resolution b = bi == 0 ? Resolution::infinite() : Resolution::bits(bi);
    std::vector<double> p(static_cast<std::size_t>(K));
    for (auto &x : p)
        x = db_to_linear(pd(eng));
    auto cfg = SystemConfig::Builder{}
                   .antennas(M)
                   .kappa(kd(eng))
                   .bits(b)
                   .source_powers(p)
                   .relay_power(db_to_linear(pd(eng)))
                   .build();
    std::uniform_real_distribution<double> gd(-6.0, 0.0);
    std::vector<double> sr(static_cast<std::size_t>(K)), rd(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
    {
        sr[k] = std::pow(10.0, gd(eng));
        rd[k] = std::pow(10.0, gd(eng));
    }
    return {cfg, LargeScaleProfile::from_gains(sr, rd)};
}

struct CheckResult
{
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct ValidationOptions
{
    std::uint64_t seed = 20260101; // master seed for every random draw
    unsigned threads = 0;          // Monte Carlo workers, 0: hardware concurrency
};

namespace detail
{
inline std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}

inline CheckResult timed(int id, std::string name, const std::function<void(CheckResult &)> &body)
{
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    const auto t0 = std::chrono::steady_clock::now();
    try
    {
        body(r);
    }
    catch (const std::exception &e)
    {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline SystemConfig config(int M, double kappa, int K, Resolution b, double p_S, double p_R)
{
    return SystemConfig::Builder{}.antennas(M).kappa(kappa).users(K).bits(b).source_power(p_S).relay_power(p_R).build();
}

inline std::string bits_name(Resolution b) { return b.is_infinite() ? "inf" : std::to_string(b.value()); }
} // namespace detail

// 1. Relay transmit power: Monte Carlo E{||x~_R||^2} over 1e5 trials against
//    mu (M0 + alpha M1), within 1 % relative.
inline CheckResult check_relay_power(const ValidationOptions &opt = {})
{
    return detail::timed(1, "relay transmit power vs Monte Carlo", [&](CheckResult &r) {
        const auto pr = uniform_gains(derive_seed(opt.seed, 1), 2);
        double worst = 0.0;
        std::string where;
        bool ok = true;
        int idx = 0;
        for (double kappa : {0.0, 0.5, 1.0})
            for (Resolution b : {Resolution::bits(1), Resolution::bits(2), Resolution::infinite()})
            {
                const auto cfg = detail::config(64, kappa, 2, b, 10.0, 10.0);
                const double a = cfg.M0() + cfg.quantizer().alpha * cfg.M1();
                const double ref = mu_per_antenna(pr, cfg) * a;
                const auto e = estimate_tx_power(pr, cfg, 100000, derive_seed(opt.seed, 1, ++idx), opt.threads);
                const double d = rel_diff(e.mean, ref);
                ok = ok && d <= 0.01;
                if (d >= worst)
                {
                    worst = d;
                    where = "kappa=" + detail::fmt(kappa) + " b=" + detail::bits_name(b) +
                            " z=" + detail::fmt(e.z_score(ref));
                }
            }
        r.passed = ok;
        r.detail = "worst relative error " + detail::fmt(worst) + " (" + where + "), limit 0.01";
    });
}

// 2. Every closed-form component A..G against its Monte Carlo estimator
//    (1e4 trials) within 3 standard errors, and the SINR within 5 %.
inline CheckResult check_components(const ValidationOptions &opt = {})
{
    return detail::timed(2, "rate components vs Monte Carlo", [&](CheckResult &r) {
        const int K = 3;
        const auto pr = uniform_gains(derive_seed(opt.seed, 2), K);
        double worst_z = 0.0, worst_sinr = 0.0;
        std::string where_z, where_sinr;
        bool ok = true;
        McOptions mo;
        mo.threads = opt.threads;
        for (int b : {1, 2, 3})
        {
            const auto cfg = detail::config(64, 0.5, K, Resolution::bits(b), 10.0, 10.0);
            const auto ex = exact_rate(pr, cfg);
            const auto mc = simulated_rate(pr, cfg, 10000, derive_seed(opt.seed, 2, b), mo);
            for (int k = 0; k < K; ++k)
            {
                const std::pair<const char *, std::pair<double, const McEstimate *>> terms[] = {
                    {"A", {ex.A[k], &mc.A[k]}}, {"B", {ex.B[k], &mc.B[k]}}, {"C", {ex.C[k], &mc.C[k]}},
                    {"D", {ex.D[k], &mc.D[k]}}, {"E", {ex.E[k], &mc.E[k]}}, {"F", {ex.F[k], &mc.F[k]}},
                    {"G", {ex.G[k], &mc.G[k]}}};
                for (const auto &[name, v] : terms)
                {
                    const double z = v.second->z_score(v.first);
                    ok = ok && z <= 3.0;
                    if (z >= worst_z)
                    {
                        worst_z = z;
                        where_z = std::string(name) + " user " + std::to_string(k) + " b=" + std::to_string(b);
                    }
                }
                const double d = rel_diff(mc.sinr[k], ex.sinr[k]);
                ok = ok && d <= 0.05;
                if (d >= worst_sinr)
                {
                    worst_sinr = d;
                    where_sinr = "user " + std::to_string(k) + " b=" + std::to_string(b);
                }
            }
        }
        r.passed = ok;
        r.detail = "worst |z| " + detail::fmt(worst_z) + " (" + where_z + "), limit 3; worst SINR error " +
                   detail::fmt(worst_sinr) + " (" + where_sinr + "), limit 0.05";
    });
}

// 3. Component form against compact coefficient form on 100 random
//    configurations (1e-9 relative), approximation against exact form when
//    unquantized (1e-12 relative).
inline CheckResult check_dual_form(const ValidationOptions &opt = {})
{
    return detail::timed(3, "component form vs compact form", [&](CheckResult &r) {
        double worst_dual = 0.0, worst_inf = 0.0;
        for (std::uint64_t i = 0; i < 100; ++i)
        {
            const auto sc = random_scenario(derive_seed(opt.seed, 3, i));
            const auto ex = exact_rate(sc.profile, sc.cfg);
            const auto cp = compact_rate(sc.profile, sc.cfg);
            for (int k = 0; k < sc.cfg.K(); ++k)
                worst_dual = std::max(worst_dual, rel_diff(cp.sinr[k], ex.sinr[k]));
            worst_dual = std::max(worst_dual, rel_diff(cp.sum_rate, ex.sum_rate));

            const auto inf = sc.cfg.with_bits(Resolution::infinite());
            const auto e = exact_rate(sc.profile, inf);
            const auto a = approx_rate(sc.profile, inf);
            for (int k = 0; k < inf.K(); ++k)
                worst_inf = std::max(worst_inf, rel_diff(a.sinr[k], e.sinr[k]));
            worst_inf = std::max(worst_inf, rel_diff(a.sum_rate, e.sum_rate));
        }
        r.passed = worst_dual <= 1e-9 && worst_inf <= 1e-12;
        r.detail = "worst dual-form error " + detail::fmt(worst_dual) + " (limit 1e-9); worst unquantized approx error " +
                   detail::fmt(worst_inf) + " (limit 1e-12)";
    });
}

// 4. Rate under p = E/M scaling approaches its large-array limit: the gap
//    shrinks monotonically over M = 2^8..2^14 and ends within 5 %.
inline CheckResult check_power_scaling(const ValidationOptions &opt = {})
{
    return detail::timed(4, "power-scaling limit", [&](CheckResult &r) {
        const auto pr = uniform_gains(derive_seed(opt.seed, 4), 2);
        bool ok = true;
        std::ostringstream os;
        for (double kappa : {0.0, 0.5, 1.0})
            for (int b : {1, 2, 3})
            {
                const auto base = SystemConfig::Builder{}
                                      .antennas(256)
                                      .kappa(kappa)
                                      .users(2)
                                      .bits(Resolution::bits(b))
                                      .budgets(10.0, 10.0)
                                      .build();
                std::vector<long double> parts;
                for (double v : scaling_limit(pr, base))
                    parts.push_back(v);
                const double lim = double(pairwise_sum(parts));
                double prev = INFINITY, gap = 0.0;
                bool mono = true;
                for (int e = 8; e <= 14; ++e)
                {
                    const int M = 1 << e;
                    const auto c = base.with_antennas(M, SystemConfig::high_res_count(M, kappa)).with_scaled_powers();
                    gap = std::abs(exact_rate(pr, c).sum_rate - lim) / lim;
                    mono = mono && gap < prev;
                    prev = gap;
                }
                if (!mono || gap > 0.05)
                {
                    ok = false;
                    os << " kappa=" << kappa << " b=" << b << (mono ? "" : " not monotone") << " gap " << gap << ";";
                }
                if (kappa == 0.5 && b == 2)
                    os << " gap at 2^14 (kappa=0.5 b=2) " << detail::fmt(gap) << ";";
            }
        r.passed = ok;
        r.detail = (ok ? "monotone and within 0.05 for kappa in {0,0.5,1}, b in {1,2,3};" : "failures:") + os.str();
    });
}

// 5. Low-power gap factors against the limit ratio at E = 1e-6 on 20 random
//    profiles (1e-3 relative); both factors exactly 1 when unquantized.
inline CheckResult check_gap_factors(const ValidationOptions &opt = {})
{
    return detail::timed(5, "low-power gap factors", [&](CheckResult &r) {
        double worst = 0.0;
        bool unity = true;
        for (std::uint64_t i = 0; i < 20; ++i)
        {
            const auto sc = random_scenario(derive_seed(opt.seed, 5, i));
            const auto cfg = sc.cfg.with_bits(Resolution::bits(1 + int(i % 4)));
            auto ratio = [&](double ES, double ER, int k) {
                const auto q = cfg.with_budgets(ES, ER);
                return scaling_limit(sc.profile, q)[k] / scaling_limit(sc.profile, q.with_bits(Resolution::infinite()))[k];
            };
            const auto fES = gap_factor_low_ES(sc.profile, cfg.with_budgets(1e-6, 10.0));
            const auto fER = gap_factor_low_ER(sc.profile, cfg.with_budgets(10.0, 1e-6));
            for (int k = 0; k < cfg.K(); ++k)
            {
                worst = std::max(worst, rel_diff(ratio(1e-6, 10.0, k), fES[k]));
                worst = std::max(worst, rel_diff(ratio(10.0, 1e-6, k), fER[k]));
            }
            const auto inf = cfg.with_bits(Resolution::infinite()).with_budgets(3.0, 7.0);
            for (double f : gap_factor_low_ES(sc.profile, inf))
                unity = unity && f == 1.0;
            for (double f : gap_factor_low_ER(sc.profile, inf))
                unity = unity && f == 1.0;
        }
        r.passed = worst <= 1e-3 && unity;
        r.detail = "worst relative error " + detail::fmt(worst) + " (limit 1e-3); unquantized factors " +
                   (unity ? "exactly 1" : "NOT 1");
    });
}

// 6. Power allocation: (a) never below the uniform split on 50 drops at
//    M = 128, K = 10, b = 2, P_T = 10; (b) single pair within 1e-2 of brute
//    force; (c) the sum rate never decreases between iterations.
inline CheckResult check_allocation(const ValidationOptions &opt = {})
{
    return detail::timed(6, "power allocation", [&](CheckResult &r) {
        const double P_T = 10.0;
        int beaten = 0, nonmono = 0, runs = 0;
        double min_gain = INFINITY, mean_gain = 0.0;
        const auto cfg = detail::config(128, 0.5, 10, Resolution::bits(2), 1.0, 1.0);
        for (std::uint64_t s = 0; s < 50; ++s)
        {
            const auto pr = drop_users(derive_seed(opt.seed, 6, s), 10);
            const double uni = uniform_allocation(pr, cfg, P_T).sum_rate;
            ++runs;
            try
            {
                const auto a = allocate(pr, cfg, P_T);
                if (a.sum_rate >= uni)
                    ++beaten;
                min_gain = std::min(min_gain, a.sum_rate / uni);
                mean_gain += a.sum_rate / uni / 50.0;
            }
            catch (const NonMonotone &)
            {
                ++nonmono;
            }
        }
        double worst_pair = 0.0;
        for (std::uint64_t s = 0; s < 6; ++s)
        {
            const auto pr = drop_users(derive_seed(opt.seed, 6, 100 + s), 1);
            const auto c1 = detail::config(128, 0.5, 1, Resolution::bits(1 + int(s % 3)), 1.0, 1.0);
            for (double pt : {1.0, 10.0, 100.0})
            {
                ++runs;
                try
                {
                    AllocationOptions o;
                    o.max_iter = 200;
                    const auto a = allocate(pr, c1, pt, o);
                    const auto bf = oracle::single_pair_search(pr, c1, pt);
                    worst_pair = std::max(worst_pair, std::abs(a.sum_rate - bf.sum_rate));
                }
                catch (const NonMonotone &)
                {
                    ++nonmono;
                }
            }
        }
        r.passed = beaten == 50 && worst_pair <= 1e-2 && nonmono == 0;
        r.detail = "(a) optimized >= uniform on " + std::to_string(beaten) + "/50, gain min " + detail::fmt(min_gain) +
                   " mean " + detail::fmt(mean_gain) + "; (b) single-pair worst gap " + detail::fmt(worst_pair) +
                   " bits/s/Hz (limit 1e-2); (c) non-monotone in " + std::to_string(nonmono) + "/" +
                   std::to_string(runs) + " runs";
    });
}

// 7. GP solver against a dense grid search on 20 random problems with up to
//    five variables, within 1 %.
inline CheckResult check_gp_solver(const ValidationOptions &opt = {})
{
    return detail::timed(7, "GP solver vs grid search", [&](CheckResult &r) {
        double worst = 0.0;
        bool sound = true;
        for (std::uint64_t i = 0; i < 20; ++i)
        {
            const int n = 1 + int(i % 5);
            const auto g = oracle::random_gp(derive_seed(opt.seed, 7, i), n);
            const auto s = solve_gp(g.problem);
            const auto grid = oracle::grid_search_gp(g, &s.x);
            worst = std::max(worst, rel_diff(s.objective, grid.objective));
            sound = sound && s.converged && oracle::gp_feasible(g.problem, s.x, 1e-9);
        }
        r.passed = sound && worst <= 0.01;
        r.detail = "worst relative gap " + detail::fmt(worst) + " (limit 0.01); all solutions feasible and converged: " +
                   (sound ? "yes" : "no");
    });
}

// 8. Power model: the all-low-resolution array is at least as energy
//    efficient as the all-high-resolution one for every b_low in 1..12; the
//    component groups add up to the total; p_adc(12) / p_adc(1) = 10^1.6775.
inline CheckResult check_energy(const ValidationOptions &opt = {})
{
    return detail::timed(8, "energy model", [&](CheckResult &r) {
        const PowerModel m;
        const auto pr = drop_users(derive_seed(opt.seed, 8), 10);
        std::vector<int> bad;
        double worst_margin = INFINITY;
        for (int b = 1; b <= m.b_high; ++b)
        {
            const double e0 = energy_efficiency(pr, detail::config(128, 0.0, 10, Resolution::bits(b), 10.0, 10.0), m);
            const double e1 = energy_efficiency(pr, detail::config(128, 1.0, 10, Resolution::bits(b), 10.0, 10.0), m);
            worst_margin = std::min(worst_margin, e0 / e1 - 1.0);
            if (!(e0 >= e1))
                bad.push_back(b);
        }
        bool audit = true;
        for (double kappa : {0.0, 0.25, 0.5, 0.75, 1.0})
            for (int b = 1; b <= m.b_high; ++b)
            {
                const auto cfg = detail::config(128, kappa, 10, Resolution::bits(b), 10.0, 10.0);
                audit = audit && power_breakdown(cfg, m, b).total() == total_power(cfg, m, b);
            }
        const double ratio_err = rel_diff(p_adc(12, m) / p_adc(1, m), std::pow(10.0, 1.6775));
        r.passed = bad.empty() && audit && ratio_err <= 1e-9;
        std::string fails;
        for (int b : bad)
            fails += (fails.empty() ? "" : ",") + std::to_string(b);
        r.detail = "ordering holds for " + std::to_string(m.b_high - int(bad.size())) + "/" + std::to_string(m.b_high) +
                   " resolutions" + (bad.empty() ? "" : " (violated at b_low=" + fails + ")") +
                   ", smallest relative margin " + detail::fmt(worst_margin) + "; audit " + (audit ? "exact" : "MISMATCH") +
                   "; ADC ratio error " + detail::fmt(ratio_err) + " (limit 1e-9)";
    });
}

// 9. Rate never decreases with resolution, and three bits come within 10 % of
//    the unquantized rate at M = 128, K = 10.
inline CheckResult check_resolution(const ValidationOptions &opt = {})
{
    return detail::timed(9, "rate vs resolution", [&](CheckResult &r) {
        bool mono = true;
        double worst_ratio = INFINITY;
        for (std::uint64_t s = 0; s < 10; ++s)
        {
            const auto pr = drop_users(derive_seed(opt.seed, 9, s), 10);
            for (int M : {16, 64, 128, 512})
                for (double kappa : {0.0, 0.25, 0.5, 0.75})
                {
                    double prev = 0.0;
                    for (int b = 1; b <= 13; ++b)
                    {
                        const Resolution res = b == 13 ? Resolution::infinite() : Resolution::bits(b);
                        const double v = exact_rate(pr, detail::config(M, kappa, 10, res, 10.0, 10.0)).sum_rate;
                        mono = mono && v >= prev;
                        prev = v;
                    }
                }
            const double r3 = exact_rate(pr, detail::config(128, 0.5, 10, Resolution::bits(3), 10.0, 10.0)).sum_rate;
            const double ri = exact_rate(pr, detail::config(128, 0.5, 10, Resolution::infinite(), 10.0, 10.0)).sum_rate;
            worst_ratio = std::min(worst_ratio, r3 / ri);
        }
        r.passed = mono && worst_ratio >= 0.9;
        r.detail = std::string("monotone in b over 160 sweeps: ") + (mono ? "yes" : "no") +
                   "; worst rate(3 bits)/rate(unquantized) " + detail::fmt(worst_ratio) + " (limit 0.9)";
    });
}

inline std::vector<std::function<CheckResult(const ValidationOptions &)>> all_checks()
{
    return {check_relay_power, check_components, check_dual_form, check_power_scaling, check_gap_factors,
            check_allocation,  check_gp_solver,  check_energy,    check_resolution};
}

inline void print_result(std::ostream &os, const CheckResult &r)
{
    os << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << ": " << r.detail << " ("
       << std::fixed << std::setprecision(1) << r.seconds << " s)" << std::defaultfloat << '\n';
}

} // namespace mmrelay::validation

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

// Closed-form achievable-rate engine for MR amplify-and-forward relaying with
// mixed-resolution converters: per-antenna relay power, normalization,
// component-form and compact-form SINRs (exact and large-array
// approximation), the power-scaling limit and the low-power gap factors.
//
// Notation used throughout:
//   a = M0 + alpha M1          first-order effective array gain
//   c = M0 + alpha^2 M1        second-order effective array gain
//   q = alpha rho M1           aggregate quantization-noise weight
//   s_m = beta_SR,m beta_RD,m  two-hop gain of pair m
//   S = sum_i p_S,i beta_SR,i  total received source power per antenna

#include "mmrelay/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mmrelay
{

enum class RateForm
{
    exact,       // exact ADC/DAC quantization-noise covariances
    approximate, // law-of-large-numbers covariances (hatted terms)
};

struct RateBreakdown
{
    RateForm form = RateForm::exact;
    // SINR components per user; empty when produced by the compact form.
    std::vector<double> A, B, C, D, E, F, G, F_hat, G_hat;
    // Compact-form denominators xi_k (nu_k = p_S,k / xi_k); empty for the component form.
    std::vector<double> xi;
    double mu = 0.0;
    double gamma = 0.0;
    std::vector<double> sinr;
    std::vector<double> rate; // bits/s/Hz including the pre-log
    double sum_rate = 0.0;
};

// Coefficients of xi_k = sum_i p_i a_ki + (sum_i p_i b_ki + c_k)/p_R + d_k.
// None of them depends on the transmit powers.
struct CompactCoefficients
{
    int K = 0;
    std::vector<double> a; // row-major K x K, a[k*K + i]
    std::vector<double> b; // row-major K x K
    std::vector<double> c;
    std::vector<double> d;

    double a_at(int k, int i) const { return a[static_cast<std::size_t>(k * K + i)]; }
    double b_at(int k, int i) const { return b[static_cast<std::size_t>(k * K + i)]; }
};

namespace detail
{
using ld = long double;

struct ArrayTerms
{
    ld a, c, q, alpha, rho;
    ld S;        // sum_i p_i beta_SR,i
    ld sum_s;    // sum_m beta_SR,m beta_RD,m
    int K;

    ArrayTerms(const LargeScaleProfile &pr, const SystemConfig &cfg)
    {
        check_profile(pr, cfg);
        const auto qp = cfg.quantizer();
        alpha = qp.alpha;
        rho = qp.rho;
        const ld M0 = cfg.M0(), M1 = cfg.M1();
        a = M0 + alpha * M1;
        c = M0 + alpha * alpha * M1;
        q = alpha * rho * M1;
        K = cfg.K();
        S = accurate_sum(K, [&](std::size_t i) { return ld(cfg.p_S()[i]) * pr.beta_SR[i]; });
        sum_s = accurate_sum(K, [&](std::size_t m) { return ld(pr.beta_SR[m]) * pr.beta_RD[m]; });
    }
};

inline ld mu_ld(const LargeScaleProfile &pr, const SystemConfig &cfg, const ArrayTerms &t)
{
    // Per-antenna relay power: q1 + q2 + q3 + q4 regrouped as
    // sum_m s_m [a (S + 1) + p_m beta_SR,m (a^2 + q)].
    return accurate_sum(t.K, [&](std::size_t m) {
        const ld s = ld(pr.beta_SR[m]) * pr.beta_RD[m];
        return s * (t.a * (t.S + 1) + ld(cfg.p_S()[m]) * pr.beta_SR[m] * (t.a * t.a + t.q));
    });
}

inline void finish(RateBreakdown &r, const SystemConfig &cfg)
{
    const double pl = prelog(cfg);
    r.rate.resize(r.sinr.size());
    std::vector<long double> parts(r.sinr.size());
    for (std::size_t k = 0; k < r.sinr.size(); ++k)
    {
        r.rate[k] = pl * std::log1p(r.sinr[k]) / std::numbers::ln2;
        parts[k] = r.rate[k];
    }
    r.sum_rate = static_cast<double>(pairwise_sum(parts));
}
} // namespace detail

// Per-antenna relay transmit power mu, so that E{||x~_R||^2} = mu (M0 + alpha M1).
// Built from the four covariance blocks
//   q1 = M0 sum_m s_m (S + M0 p_m beta_SR,m + 1)
//   q2 = q3 = alpha M0 M1 sum_m p_m beta_SR,m^2 beta_RD,m
//   q4 = alpha M1 sum_m s_m (S + (alpha M1 + rho) p_m beta_SR,m + 1)
inline double mu_per_antenna(const LargeScaleProfile &profile, const SystemConfig &cfg)
{
    const detail::ArrayTerms t(profile, cfg);
    const double mu = static_cast<double>(detail::mu_ld(profile, cfg, t));
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::domain_error("mu_per_antenna: degenerate relay power (all-zero gains?)");
    return mu;
}

// gamma = sqrt(p_R / (mu (M0 + alpha M1)))
inline double gamma_norm(const LargeScaleProfile &profile, const SystemConfig &cfg)
{
    if (!(cfg.p_R() > 0.0))
        throw std::invalid_argument("gamma_norm: relay power must be positive");
    const double mu = mu_per_antenna(profile, cfg);
    const auto q = cfg.quantizer();
    return std::sqrt(cfg.p_R() / (mu * (cfg.M0() + q.alpha * cfg.M1())));
}

namespace detail
{
inline RateBreakdown component_rate(const LargeScaleProfile &pr, const SystemConfig &cfg, RateForm form)
{
    const ArrayTerms t(pr, cfg);
    const int K = t.K;
    const ld a = t.a, c = t.c, q = t.q;
    const ld a2 = a * a;
    const ld mu = mu_ld(pr, cfg, t);
    if (!(mu > 0))
        throw std::domain_error("rate: degenerate relay power (all-zero gains?)");
    if (!(cfg.p_R() > 0.0))
        throw std::invalid_argument("rate: relay power must be positive");
    const ld g2 = ld(cfg.p_R()) / (mu * a);

    const auto &bs = pr.beta_SR;
    const auto &bd = pr.beta_RD;
    const auto &p = cfg.p_S();

    // sum_m s_m (S + p_m beta_SR,m + 1) and sum_m s_m (S + 1 + a p_m beta_SR,m)
    const ld sum_f = accurate_sum(K, [&](std::size_t m) { return ld(bs[m]) * bd[m] * (t.S + ld(p[m]) * bs[m] + 1); });
    const ld sum_g = accurate_sum(K, [&](std::size_t m) { return ld(bs[m]) * bd[m] * (t.S + 1 + a * p[m] * bs[m]); });
    const ld sum_p2 = accurate_sum(K, [&](std::size_t i) { return ld(p[i]) * bs[i] * bs[i] * bd[i]; });

    RateBreakdown r;
    r.form = form;
    r.mu = static_cast<double>(mu);
    r.gamma = static_cast<double>(std::sqrt(g2));
    for (auto *v : {&r.A, &r.B, &r.C, &r.D, &r.E, &r.F, &r.G, &r.F_hat, &r.G_hat, &r.sinr})
        v->resize(static_cast<std::size_t>(K));

    for (int k = 0; k < K; ++k)
    {
        const ld bsk = bs[k], bdk = bd[k], pk = p[k];
        const ld sk = bsk * bdk;
        const ld A = pk * g2 * a2 * a2 * sk * sk;
        const ld B = pk * g2 * c * sk * (2 * a2 * sk + c * t.sum_s);
        const ld C = g2 * c * accurate_sum(K, [&](std::size_t i) -> ld {
                         if (static_cast<int>(i) == k)
                             return 0;
                         const ld bsi = bs[i], bdi = bd[i];
                         return ld(p[i]) * (a2 * (bsk * bdk * bdk * bsi + bdk * bsi * bsi * bdi) + c * bdk * bsi * t.sum_s);
                     });
        const ld relay_noise = a2 * bsk * bdk * bdk + c * bdk * t.sum_s;
        const ld D = g2 * cfg.M0() * relay_noise;
        const ld E = g2 * t.alpha * t.alpha * cfg.M1() * relay_noise;
        const ld F = q * g2 * bdk * (c * sum_f + a2 * sk * (t.S + pk * bsk + 1));
        const ld G = q * g2 * a * bdk * (sk * (t.S + 1 + a * pk * bsk) + sum_g) +
                     q * q * g2 * bdk * (sum_p2 + pk * bsk * bsk * bdk);
        const ld F_hat = t.alpha > 0 ? (t.rho / t.alpha) * (t.S + 1) * E : 0;
        const ld G_hat = g2 * q * mu * bdk;

        r.A[k] = double(A);
        r.B[k] = double(B);
        r.C[k] = double(C);
        r.D[k] = double(D);
        r.E[k] = double(E);
        r.F[k] = double(F);
        r.G[k] = double(G);
        r.F_hat[k] = double(F_hat);
        r.G_hat[k] = double(G_hat);

        const ld Fq = form == RateForm::exact ? F : F_hat;
        const ld Gq = form == RateForm::exact ? G : G_hat;
        std::vector<long double> den{B, C, D, E, Fq, Gq, 1.0L};
        r.sinr[k] = double(A / pairwise_sum(den));
    }
    finish(r, cfg);
    return r;
}
} // namespace detail

// Exact closed-form rate: nu_k = A_k / (B_k + C_k + D_k + E_k + F_k + G_k + 1).
inline RateBreakdown exact_rate(const LargeScaleProfile &profile, const SystemConfig &cfg)
{
    return detail::component_rate(profile, cfg, RateForm::exact);
}

// Large-array approximation: F_k, G_k replaced by F^_k = (rho/alpha)(S + 1) E_k
// and G^_k = gamma^2 alpha rho mu M1 beta_RD,k.
inline RateBreakdown approx_rate(const LargeScaleProfile &profile, const SystemConfig &cfg)
{
    return detail::component_rate(profile, cfg, RateForm::approximate);
}

inline CompactCoefficients compact_coefficients(const LargeScaleProfile &pr, const SystemConfig &cfg,
                                                RateForm form = RateForm::exact)
{
    using detail::ld;
    const detail::ArrayTerms t(pr, cfg);
    const int K = t.K;
    const ld a = t.a, q = t.q;
    const ld a2 = a * a, a3 = a2 * a;
    const auto &bs = pr.beta_SR;
    const auto &bd = pr.beta_RD;

    CompactCoefficients cc;
    cc.K = K;
    cc.a.resize(static_cast<std::size_t>(K * K));
    cc.b.resize(static_cast<std::size_t>(K * K));
    cc.c.resize(static_cast<std::size_t>(K));
    cc.d.resize(static_cast<std::size_t>(K));

    for (int k = 0; k < K; ++k)
    {
        const ld bsk = bs[k], bdk = bd[k];
        const ld sk = bsk * bdk;
        const ld ratio_sum = t.sum_s / sk;
        for (int i = 0; i < K; ++i)
        {
            const ld bsi = bs[i], bdi = bd[i];
            const ld si = bsi * bdi;
            ld aki;
            if (form == RateForm::exact)
            {
                if (i != k)
                    aki = (bsi / bsk) / a * (1 + q / a2 + (si / sk) * (1 + q / a2) + ratio_sum / a);
                else
                    aki = (2 + (q / a) * (2 + 2 / a + q / a2) + ratio_sum / a) / a;
            }
            else
            {
                aki = (bsi / bsk) / a * (1 + (si / sk) * (1 + q * q / a3) + ratio_sum / a);
            }
            const ld bki = (bsi * bsi * bdi) / (a * sk * sk) * (1 + q / a2) + bsi * t.sum_s / (a2 * sk * sk);
            cc.a[static_cast<std::size_t>(k * K + i)] = double(aki);
            cc.b[static_cast<std::size_t>(k * K + i)] = double(bki);
        }
        cc.c[k] = double(t.sum_s / (a2 * sk * sk));
        ld dk = 1 / (a * bsk) + t.sum_s / (a2 * bsk * bsk * bdk);
        if (form == RateForm::exact)
            dk += q / (a3 * bsk);
        cc.d[k] = double(dk);
    }
    return cc;
}

// xi_k for arbitrary powers; shared by the compact rate and the allocator.
inline std::vector<double> compact_xi(const CompactCoefficients &cc, const std::vector<double> &p_S, double p_R)
{
    const int K = cc.K;
    std::vector<double> xi(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
    {
        const long double pa = accurate_sum(K, [&](std::size_t i) { return (long double)p_S[i] * cc.a_at(k, int(i)); });
        const long double pb = accurate_sum(K, [&](std::size_t i) { return (long double)p_S[i] * cc.b_at(k, int(i)); });
        std::vector<long double> parts{pa, (pb + cc.c[k]) / p_R, (long double)cc.d[k]};
        xi[k] = double(pairwise_sum(parts));
    }
    return xi;
}

// Compact form nu_k = p_S,k / xi_k, evaluated from the a/b/c/d coefficients.
inline RateBreakdown compact_rate(const LargeScaleProfile &profile, const SystemConfig &cfg,
                                  RateForm form = RateForm::exact)
{
    if (!(cfg.p_R() > 0.0))
        throw std::invalid_argument("compact_rate: relay power must be positive");
    const auto cc = compact_coefficients(profile, cfg, form);
    RateBreakdown r;
    r.form = form;
    r.mu = mu_per_antenna(profile, cfg);
    r.gamma = gamma_norm(profile, cfg);
    r.xi = compact_xi(cc, cfg.p_S(), cfg.p_R());
    r.sinr.resize(r.xi.size());
    for (std::size_t k = 0; k < r.xi.size(); ++k)
        r.sinr[k] = cfg.p_S()[k] / r.xi[k];
    detail::finish(r, cfg);
    return r;
}

// ---- power scaling ---------------------------------------------------------

// alpha + rho kappa = (1 - kappa) alpha + kappa
inline double effective_resolution(const SystemConfig &cfg)
{
    const auto q = cfg.quantizer();
    return q.alpha + q.rho * cfg.kappa();
}

// Per-user rate limit as M -> infinity with p_S = E_S/M and p_R = E_R/M.
inline std::vector<double> scaling_limit(const LargeScaleProfile &profile, const SystemConfig &cfg)
{
    check_profile(profile, cfg);
    if (!(cfg.E_S() > 0.0) || !(cfg.E_R() > 0.0))
        throw std::invalid_argument("scaling_limit: E_S and E_R must be positive");
    using detail::ld;
    const int K = cfg.K();
    const ld ar = effective_resolution(cfg);
    const ld ES = cfg.E_S(), ER = cfg.E_R();
    const auto &bs = profile.beta_SR;
    const auto &bd = profile.beta_RD;
    const ld sum_s = accurate_sum(K, [&](std::size_t m) { return ld(bs[m]) * bd[m]; });
    const ld sum_b = accurate_sum(K, [&](std::size_t i) { return ld(bs[i]) * bs[i] * bd[i]; });
    const double pl = prelog(cfg);
    std::vector<double> out(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
    {
        const ld s2 = ld(bs[k]) * bs[k] * bd[k] * bd[k];
        const ld den = ES * ar * sum_b / s2 + sum_s / s2 + ER * ar / bs[k];
        out[k] = pl * std::log1p(double(ES * ER * ar * ar / den)) / std::numbers::ln2;
    }
    return out;
}

// Rate ratio to the unquantized system as E_S -> 0 (E_R fixed).
inline std::vector<double> gap_factor_low_ES(const LargeScaleProfile &profile, const SystemConfig &cfg)
{
    check_profile(profile, cfg);
    if (!(cfg.E_R() > 0.0))
        throw std::invalid_argument("gap_factor_low_ES: E_R must be positive");
    using detail::ld;
    const int K = cfg.K();
    const ld ar = effective_resolution(cfg);
    const ld ER = cfg.E_R();
    const auto &bs = profile.beta_SR;
    const auto &bd = profile.beta_RD;
    const ld sum_s = accurate_sum(K, [&](std::size_t m) { return ld(bs[m]) * bd[m]; });
    std::vector<double> out(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
    {
        const ld x = ER * bs[k] * bd[k] * bd[k];
        out[k] = double(ar * ar * (x + sum_s) / (ar * x + sum_s));
    }
    return out;
}

// Rate ratio to the unquantized system as E_R -> 0 (E_S fixed). Identical for all users.
inline std::vector<double> gap_factor_low_ER(const LargeScaleProfile &profile, const SystemConfig &cfg)
{
    check_profile(profile, cfg);
    if (!(cfg.E_S() > 0.0))
        throw std::invalid_argument("gap_factor_low_ER: E_S must be positive");
    using detail::ld;
    const int K = cfg.K();
    const ld ar = effective_resolution(cfg);
    const ld ES = cfg.E_S();
    const auto &bs = profile.beta_SR;
    const auto &bd = profile.beta_RD;
    const ld sum_s = accurate_sum(K, [&](std::size_t m) { return ld(bs[m]) * bd[m]; });
    const ld sum_b = accurate_sum(K, [&](std::size_t m) { return ld(bs[m]) * bs[m] * bd[m]; });
    const double f = double(ar * ar * (ES * sum_b + sum_s) / (ar * ES * sum_b + sum_s));
    return std::vector<double>(static_cast<std::size_t>(K), f);
}

} // namespace mmrelay

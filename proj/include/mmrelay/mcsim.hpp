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

// Monte Carlo simulator of the two-hop link. Each trial draws a channel,
// Gaussian source symbols and every noise vector, runs the relay front end
// (ADC quantization, MR processing, DAC quantization) and records the
// destination signal twice: once by the dense forward path and once split
// into its desired/noise components. Ensemble statistics of those
// components estimate every expectation the closed-form rate relies on.

#include "mmrelay/aqnm.hpp"
#include "mmrelay/rate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace mmrelay
{

struct McEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    long trials = 0;

    // |estimate - reference| in units of the standard error.
    double z_score(double reference) const
    {
        const double d = std::abs(mean - reference);
        return std_error > 0.0 ? d / std_error : (d == 0.0 ? 0.0 : INFINITY);
    }
};

inline McEstimate make_estimate(std::span<const double> samples)
{
    if (samples.size() < 2)
        throw std::invalid_argument("make_estimate: need at least two samples");
    const auto n = samples.size();
    const long double mean = accurate_sum(n, [&](std::size_t i) { return samples[i]; }) / n;
    const long double ss = accurate_sum(n, [&](std::size_t i) {
        const long double d = samples[i] - mean;
        return d * d;
    });
    McEstimate e;
    e.mean = double(mean);
    e.std_error = double(std::sqrt(ss / (n - 1)) / std::sqrt((long double)n));
    e.trials = static_cast<long>(n);
    return e;
}

// Additive parts of y_D,k in the order they are stored.
enum class Term
{
    signal,       // sqrt(p_k) T_kk x_k: desired signal plus its estimation error
    interference, // sum_{i != k} T_ki sqrt(p_i) x_i
    noise_hi,     // relay AWGN through high-resolution receive chains
    noise_lo,     // relay AWGN through low-resolution receive chains
    qn_adc,       // ADC quantization noise
    qn_dac,       // DAC quantization noise
    destination,  // destination AWGN
};
inline constexpr int kTermCount = 7;

struct McLinkSample
{
    Eigen::MatrixXcd T;          // K x K effective gains
    Eigen::VectorXcd x_S;        // source symbols
    Eigen::MatrixXcd components; // K x kTermCount, complex value of each Term
    Eigen::VectorXcd y_D;        // destination signal via the dense forward path
    double tx_power = 0.0;       // ||x~_R||^2 before normalization
    double gamma = 0.0;

    double power(Term t, int k) const { return std::norm(components(k, static_cast<int>(t))); }
};

namespace detail
{
struct RelayPass
{
    Eigen::VectorXcd x_S;
    Eigen::VectorXcd n_R;
    QuantizedRx rx;
    Eigen::VectorXcd x_R;
    QuantizedTx tx;
};

// Source transmission, ADC quantization, MR processing x_R = G_RD^* G_SR^H y~_R
// (applied in factored form) and DAC quantization.
inline RelayPass relay_pass(const ChannelRealization &ch, const SystemConfig &cfg, std::uint64_t seed)
{
    RelayPass r;
    const int K = cfg.K();
    Engine sym(stream_seed(seed, Stream::symbols));
    r.x_S = complex_gaussian_vector(sym, K);
    Engine rn(stream_seed(seed, Stream::relay_noise));
    r.n_R = complex_gaussian_vector(rn, cfg.M());

    Eigen::VectorXcd px(K);
    for (int k = 0; k < K; ++k)
        px[k] = std::sqrt(cfg.p_S(k)) * r.x_S[k];
    const Eigen::VectorXcd y_R = ch.G_SR * px + r.n_R;

    r.rx = quantize_rx(y_R, ch, cfg, stream_seed(seed, Stream::adc_noise));
    const Eigen::VectorXcd z = ch.G_SR.adjoint() * r.rx.y_tilde;
    r.x_R = ch.G_RD.conjugate() * z;
    r.tx = quantize_tx(r.x_R, cfg, stream_seed(seed, Stream::dac_noise));
    return r;
}

// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be
// written to per-index slots so that reductions stay deterministic.
inline void parallel_for(long n, unsigned threads, const std::function<void(long)> &body)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<long>(threads, std::max(1L, n)));
    if (threads <= 1)
    {
        for (long i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::jthread> pool;
    const long chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w)
    {
        const long lo = w * chunk;
        const long hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([lo, hi, &body] {
            for (long i = lo; i < hi; ++i)
                body(i);
        });
    }
}

inline std::uint64_t trial_seed(std::uint64_t master, long trial)
{
    return stream_seed(master, Stream::trial, static_cast<std::uint64_t>(trial));
}
} // namespace detail

struct LinkOptions
{
    // Normalization factor; defaults to the closed-form statistical gamma.
    std::optional<double> gamma;
};

// One full two-hop pass for a single realization.
inline McLinkSample simulate_link(const LargeScaleProfile &profile, const SystemConfig &cfg, std::uint64_t seed,
                                  const LinkOptions &opts = {})
{
    check_profile(profile, cfg);
    const int K = cfg.K();
    const int M0 = cfg.M0();
    const int M1 = cfg.M1();
    const double gamma = opts.gamma ? *opts.gamma : gamma_norm(profile, cfg);
    if (!std::isfinite(gamma))
        throw std::domain_error("simulate_link: normalization factor is not finite");

    const auto ch = draw_channel(stream_seed(seed, Stream::channel), profile, cfg);
    const auto pass = detail::relay_pass(ch, cfg, seed);
    Engine dn(stream_seed(seed, Stream::destination_noise));
    const Eigen::VectorXcd n_D = complex_gaussian_vector(dn, K);

    McLinkSample s;
    s.gamma = gamma;
    s.x_S = pass.x_S;
    s.tx_power = pass.tx.x_tilde.squaredNorm();
    s.y_D = gamma * (ch.G_RD.transpose() * pass.tx.x_tilde) + n_D;

    const double alpha_a = cfg.adc().alpha;
    const double alpha_d = cfg.dac().alpha;
    // U = G_RD0^T G_RD0^* + alpha_d G_RD1^T G_RD1^*, V = G_SR0^H G_SR0 + alpha_a G_SR1^H G_SR1
    const Eigen::MatrixXcd U = ch.RD0().transpose() * ch.RD0().conjugate() +
                               alpha_d * (ch.RD1().transpose() * ch.RD1().conjugate());
    const Eigen::MatrixXcd V = ch.SR0().adjoint() * ch.SR0() + alpha_a * (ch.SR1().adjoint() * ch.SR1());
    s.T = gamma * (U * V);

    Eigen::VectorXcd px(K);
    for (int k = 0; k < K; ++k)
        px[k] = std::sqrt(cfg.p_S(k)) * pass.x_S[k];

    const Eigen::VectorXcd hi = gamma * (U * (ch.SR0().adjoint() * pass.n_R.head(M0)));
    const Eigen::VectorXcd lo = (gamma * alpha_a) * (U * (ch.SR1().adjoint() * pass.n_R.tail(M1)));
    const Eigen::VectorXcd adc = gamma * (U * (ch.SR1().adjoint() * pass.rx.n_qa));
    const Eigen::VectorXcd dac = gamma * (ch.RD1().transpose() * pass.tx.n_qd);
    const Eigen::VectorXcd all = s.T * px;

    s.components.resize(K, kTermCount);
    for (int k = 0; k < K; ++k)
    {
        const cdouble sig = s.T(k, k) * px[k];
        s.components(k, int(Term::signal)) = sig;
        s.components(k, int(Term::interference)) = all[k] - sig;
        s.components(k, int(Term::noise_hi)) = hi[k];
        s.components(k, int(Term::noise_lo)) = lo[k];
        s.components(k, int(Term::qn_adc)) = adc[k];
        s.components(k, int(Term::qn_dac)) = dac[k];
        s.components(k, int(Term::destination)) = n_D[k];
    }
    return s;
}

// E{||x~_R||^2} over `trials` independent channel and signal draws.
inline McEstimate estimate_tx_power(const LargeScaleProfile &profile, const SystemConfig &cfg, long trials,
                                    std::uint64_t seed, unsigned threads = 0)
{
    check_profile(profile, cfg);
    if (trials < 100)
        throw std::invalid_argument("estimate_tx_power: need at least 100 trials");
    std::vector<double> p(static_cast<std::size_t>(trials));
    detail::parallel_for(trials, threads, [&](long t) {
        const auto ts = detail::trial_seed(seed, t);
        const auto ch = draw_channel(stream_seed(ts, Stream::channel), profile, cfg);
        p[static_cast<std::size_t>(t)] = detail::relay_pass(ch, cfg, ts).tx.x_tilde.squaredNorm();
    });
    return make_estimate(p);
}

enum class GammaMode
{
    closed_form, // statistical gamma from the per-antenna power mu
    empirical,   // gamma from a separate Monte Carlo estimate of E{||x~_R||^2}
};

struct McOptions
{
    GammaMode gamma_mode = GammaMode::closed_form;
    long gamma_trials = 10000;
    unsigned threads = 0; // 0: hardware concurrency
    double warn_relative_error = 0.05;
};

// Per-trial scalars kept for CSV export and custom statistics.
struct TrialRecords
{
    int K = 0;
    long trials = 0;
    std::vector<cdouble> T_kk;                  // trials x K
    std::vector<cdouble> x;                     // trials x K
    std::vector<double> power;                  // trials x K x kTermCount (|component|^2)
    std::vector<double> received;               // trials x K, |y_D,k|^2 from the dense path
    std::vector<double> tx_power;               // trials

    std::size_t at(long t, int k) const { return static_cast<std::size_t>(t * K + k); }
    double term_power(long t, int k, Term term) const
    {
        return power[static_cast<std::size_t>((t * K + k) * kTermCount + static_cast<int>(term))];
    }
};

struct SimulatedRate
{
    // Monte Carlo counterparts of the closed-form components, per user.
    std::vector<McEstimate> A, B, C, D, E, F, G, noise;
    std::vector<McEstimate> received; // E|y_D,k|^2
    std::vector<cdouble> T_mean;      // E{T_kk}
    std::vector<double> T_mean_se;
    McEstimate tx_power;
    double gamma = 0.0;
    std::vector<double> sinr;
    std::vector<double> rate;
    double sum_rate = 0.0;
    std::vector<std::string> warnings;
    TrialRecords records;

    double effective_noise(int k) const
    {
        return B[k].mean + C[k].mean + D[k].mean + E[k].mean + F[k].mean + G[k].mean + noise[k].mean;
    }
};

// Simulated achievable rate: the receiver knows only E{T_kk}; everything
// else is effective noise whose power is estimated term by term.
inline SimulatedRate simulated_rate(const LargeScaleProfile &profile, const SystemConfig &cfg, long trials,
                                    std::uint64_t seed, const McOptions &opts = {})
{
    check_profile(profile, cfg);
    if (trials < 2)
        throw std::invalid_argument("simulated_rate: need at least two trials");
    const int K = cfg.K();

    SimulatedRate out;
    if (opts.gamma_mode == GammaMode::closed_form)
        out.gamma = gamma_norm(profile, cfg);
    else
    {
        const auto P = estimate_tx_power(profile, cfg, opts.gamma_trials, derive_seed(seed, 0x6a6d), opts.threads);
        out.gamma = std::sqrt(cfg.p_R() / P.mean);
    }

    auto &rec = out.records;
    rec.K = K;
    rec.trials = trials;
    const auto n = static_cast<std::size_t>(trials);
    rec.T_kk.resize(n * K);
    rec.x.resize(n * K);
    rec.power.resize(n * K * kTermCount);
    rec.received.resize(n * K);
    rec.tx_power.resize(n);

    const LinkOptions lo{out.gamma};
    detail::parallel_for(trials, opts.threads, [&](long t) {
        const auto s = simulate_link(profile, cfg, detail::trial_seed(seed, t), lo);
        rec.tx_power[static_cast<std::size_t>(t)] = s.tx_power;
        for (int k = 0; k < K; ++k)
        {
            rec.T_kk[rec.at(t, k)] = s.T(k, k);
            rec.x[rec.at(t, k)] = s.x_S[k];
            rec.received[rec.at(t, k)] = std::norm(s.y_D[k]);
            for (int j = 0; j < kTermCount; ++j)
                rec.power[rec.at(t, k) * kTermCount + j] = s.power(static_cast<Term>(j), k);
        }
    });

    out.tx_power = make_estimate(rec.tx_power);
    std::vector<double> buf(n);
    auto term_estimate = [&](int k, Term term) {
        for (std::size_t t = 0; t < n; ++t)
            buf[t] = rec.term_power(long(t), k, term);
        return make_estimate(buf);
    };

    const double pl = prelog(cfg);
    for (int k = 0; k < K; ++k)
    {
        const double pk = cfg.p_S(k);
        cdouble mean = 0.0;
        {
            std::vector<long double> re(n), im(n);
            for (std::size_t t = 0; t < n; ++t)
            {
                re[t] = rec.T_kk[rec.at(long(t), k)].real();
                im[t] = rec.T_kk[rec.at(long(t), k)].imag();
            }
            mean = cdouble(double(pairwise_sum(re) / n), double(pairwise_sum(im) / n));
        }
        const double mag = std::abs(mean);
        // Project onto the mean direction for the delta-method error of |E T|^2.
        for (std::size_t t = 0; t < n; ++t)
            buf[t] = mag > 0 ? (rec.T_kk[rec.at(long(t), k)] * std::conj(mean)).real() / mag : 0.0;
        const auto proj = make_estimate(buf);
        out.T_mean.push_back(mean);
        out.T_mean_se.push_back(proj.std_error);
        out.A.push_back({pk * mag * mag, 2.0 * pk * mag * proj.std_error, trials});

        const double bessel = double(n) / double(n - 1);
        for (std::size_t t = 0; t < n; ++t)
            buf[t] = bessel * pk * std::norm(rec.T_kk[rec.at(long(t), k)] - mean) *
                     std::norm(rec.x[rec.at(long(t), k)]);
        out.B.push_back(make_estimate(buf));
        out.C.push_back(term_estimate(k, Term::interference));
        out.D.push_back(term_estimate(k, Term::noise_hi));
        out.E.push_back(term_estimate(k, Term::noise_lo));
        out.F.push_back(term_estimate(k, Term::qn_adc));
        out.G.push_back(term_estimate(k, Term::qn_dac));
        out.noise.push_back(term_estimate(k, Term::destination));
        for (std::size_t t = 0; t < n; ++t)
            buf[t] = rec.received[rec.at(long(t), k)];
        out.received.push_back(make_estimate(buf));

        const double sinr = out.A[k].mean / out.effective_noise(k);
        out.sinr.push_back(sinr);
        out.rate.push_back(pl * std::log1p(sinr) / std::numbers::ln2);

        const std::pair<const char *, const McEstimate *> checks[] = {
            {"A", &out.A[k]}, {"B", &out.B[k]}, {"C", &out.C[k]}, {"D", &out.D[k]},
            {"E", &out.E[k]}, {"F", &out.F[k]}, {"G", &out.G[k]}};
        for (const auto &[name, e] : checks)
            if (e->mean > 0.0 && e->std_error / e->mean > opts.warn_relative_error)
                out.warnings.push_back(std::string("user ") + std::to_string(k) + " term " + name +
                                       ": relative standard error " + std::to_string(e->std_error / e->mean) +
                                       " exceeds threshold, consider more trials");
    }
    std::vector<long double> parts(out.rate.begin(), out.rate.end());
    out.sum_rate = double(pairwise_sum(parts));
    return out;
}

// Per-term CSV: trial, k, desired_power, est_error, interference, noise_hi, noise_lo, qn_adc, qn_dac
inline void write_trial_csv(std::ostream &os, const SimulatedRate &r, const SystemConfig &cfg)
{
    const auto &rec = r.records;
    const auto old = os.precision(9);
    os << "trial,k,desired_power,est_error,interference,noise_hi,noise_lo,qn_adc,qn_dac\n";
    for (long t = 0; t < rec.trials; ++t)
        for (int k = 0; k < rec.K; ++k)
        {
            const double pk = cfg.p_S(k);
            const double x2 = std::norm(rec.x[rec.at(t, k)]);
            os << t << ',' << k << ',' << pk * std::norm(r.T_mean[k]) * x2 << ','
               << pk * std::norm(rec.T_kk[rec.at(t, k)] - r.T_mean[k]) * x2 << ','
               << rec.term_power(t, k, Term::interference) << ',' << rec.term_power(t, k, Term::noise_hi) << ','
               << rec.term_power(t, k, Term::noise_lo) << ',' << rec.term_power(t, k, Term::qn_adc) << ','
               << rec.term_power(t, k, Term::qn_dac) << '\n';
        }
    os.precision(old);
}

} // namespace mmrelay

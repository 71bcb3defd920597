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

#include <catch_amalgamated.hpp>

#include "mmrelay/mcsim.hpp"
#include "support.hpp"

#include <sstream>

using namespace mmrelay;
using namespace mmrelay::testing;
using Catch::Matchers::WithinRel;

TEST_CASE("Dense forward path equals the sum of the signal components", "[mcsim]")
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed)
    {
        auto rc = random_case(seed);
        if (rc.cfg.M() > 128)
            rc.cfg = rc.cfg.with_antennas(64, 20);
        const auto s = simulate_link(rc.profile, rc.cfg, seed);
        for (int k = 0; k < rc.cfg.K(); ++k)
        {
            const cdouble sum = s.components.row(k).sum();
            CHECK(std::abs(sum - s.y_D[k]) <= 1e-9 * std::max(1.0, std::abs(s.y_D[k])));
            for (int j = 0; j < kTermCount; ++j)
                CHECK(s.power(static_cast<Term>(j), k) >= 0.0);
        }
    }
}

TEST_CASE("Two-antenna single pair effective gain against a dense evaluation", "[mcsim]")
{
    const auto pr = LargeScaleProfile::from_gains({0.9}, {1.1});
    const auto cfg = SystemConfig::Builder{}.antennas(2).high_res_antennas(2).users(1).build();
    const std::uint64_t seed = 77;
    const auto s = simulate_link(pr, cfg, seed);
    const auto ch = draw_channel(stream_seed(seed, Stream::channel), pr, cfg);
    const Eigen::VectorXcd gs = ch.G_SR.col(0), gd = ch.G_RD.col(0);
    const cdouble dense = s.gamma * (gd.transpose() * ch.G_RD.conjugate() * ch.G_SR.adjoint() * gs)(0, 0);
    const cdouble reduced = s.gamma * gd.squaredNorm() * gs.squaredNorm();
    CHECK(std::abs(s.T(0, 0) - dense) <= 1e-12 * std::abs(dense));
    // With one pair the MR product collapses to the two squared norms.
    CHECK(std::abs(s.T(0, 0) - reduced) <= 1e-12 * std::abs(reduced));
}

TEST_CASE("Unquantized links carry no quantization noise", "[mcsim]")
{
    const auto pr = moderate_profile(3, 3);
    for (double kappa : {0.0, 0.5, 1.0})
    {
        const auto cfg = make_config(16, kappa, 3, Resolution::infinite());
        for (std::uint64_t seed = 0; seed < 10; ++seed)
        {
            const auto s = simulate_link(pr, cfg, seed);
            for (int k = 0; k < 3; ++k)
            {
                CHECK(s.power(Term::qn_adc, k) == 0.0);
                CHECK(s.power(Term::qn_dac, k) == 0.0);
            }
        }
    }
}

TEST_CASE("Non-finite normalization is refused", "[mcsim]")
{
    const auto pr = moderate_profile(3, 1);
    const auto cfg = make_config(8, 0.5, 1, Resolution::bits(2));
    CHECK_THROWS_AS(simulate_link(pr, cfg, 1, LinkOptions{INFINITY}), std::domain_error);
    CHECK_THROWS_AS(simulate_link(LargeScaleProfile::from_gains({1e-200}, {1e-200}), cfg, 1), std::domain_error);
}

TEST_CASE("Mean effective gain matches the squared array gain", "[mcsim]")
{
    const auto pr = LargeScaleProfile::from_gains({0.6, 1.2}, {1.0, 0.8});
    for (int b : {1, 3})
    {
        const auto cfg = make_config(64, 0.5, 2, Resolution::bits(b));
        const auto r = simulated_rate(pr, cfg, 4000, 5);
        const double a = cfg.M0() + cfg.quantizer().alpha * cfg.M1();
        for (int k = 0; k < 2; ++k)
        {
            const double expected = a * a * pr.beta_SR[k] * pr.beta_RD[k];
            CHECK(std::abs(r.T_mean[k].real() / r.gamma - expected) < 3 * r.T_mean_se[k] / r.gamma);
            CHECK(std::abs(r.T_mean[k].imag()) < 4 * r.T_mean_se[k] + 1e-3 * std::abs(r.T_mean[k]));
        }
    }
}

TEST_CASE("Relay transmit power matches its closed form", "[mcsim]")
{
    const auto pr = LargeScaleProfile::from_gains({0.6, 1.2}, {1.0, 0.8});
    const long trials = 20000;

    SECTION("unquantized: mu M")
    {
        const auto cfg = make_config(32, 0.5, 2, Resolution::infinite());
        const auto e = estimate_tx_power(pr, cfg, trials, 1);
        CHECK(e.z_score(mu_per_antenna(pr, cfg) * 32) < 3.0);
    }
    SECTION("all high-resolution: mu M0")
    {
        const auto cfg = make_config(32, 1.0, 2, Resolution::bits(1));
        const auto e = estimate_tx_power(pr, cfg, trials, 2);
        CHECK(e.z_score(mu_per_antenna(pr, cfg) * 32) < 3.0);
    }
    SECTION("ratio to the effective array size is constant across kappa")
    {
        std::vector<double> ratio;
        for (double kappa : {0.0, 0.5, 1.0})
        {
            const auto cfg = make_config(32, kappa, 2, Resolution::bits(1));
            const auto e = estimate_tx_power(pr, cfg, trials, 3);
            const double a = cfg.M0() + cfg.quantizer().alpha * cfg.M1();
            ratio.push_back(e.mean / a / mu_per_antenna(pr, cfg));
            CHECK(e.z_score(mu_per_antenna(pr, cfg) * a) < 3.0);
        }
        for (double r : ratio)
            CHECK_THAT(r, WithinRel(1.0, 0.02));
    }
    SECTION("single pair regression point")
    {
        const auto cfg = make_config(64, 0.5, 1, Resolution::bits(1));
        const auto one = LargeScaleProfile::from_gains({1.0}, {1.0});
        const auto e = estimate_tx_power(one, cfg, trials, 4);
        const double a = 32 + cfg.quantizer().alpha * 32;
        CHECK(e.z_score(2854.88788352 * a) < 3.0);
    }
    CHECK_THROWS_AS(estimate_tx_power(pr, make_config(8, 0.5, 2, Resolution::bits(1)), 99, 1), std::invalid_argument);
}

TEST_CASE("DAC quantization noise energy matches alpha rho mu M1", "[mcsim]")
{
    const auto pr = LargeScaleProfile::from_gains({0.6, 1.2}, {1.0, 0.8});
    const auto cfg = make_config(64, 0.5, 2, Resolution::bits(1));
    const long trials = 10000;
    std::vector<double> e(trials);
    for (long t = 0; t < trials; ++t)
    {
        const auto ts = derive_seed(8, t);
        const auto ch = draw_channel(stream_seed(ts, Stream::channel), pr, cfg);
        e[t] = detail::relay_pass(ch, cfg, ts).tx.n_qd.squaredNorm();
    }
    const auto q = cfg.quantizer();
    CHECK_THAT(make_estimate(e).mean, WithinRel(q.alpha * q.rho * mu_per_antenna(pr, cfg) * cfg.M1(), 0.02));
}

TEST_CASE("Closed-form normalization meets the relay power budget", "[mcsim]")
{
    const auto pr = moderate_profile(31, 3);
    const auto cfg = make_config(64, 0.5, 3, Resolution::bits(2), 4.0, 7.0);
    const auto r = simulated_rate(pr, cfg, 10000, 9);
    CHECK_THAT(r.gamma * r.gamma * r.tx_power.mean, WithinRel(7.0, 0.02));
}

TEST_CASE("Noise decomposition is complete", "[mcsim]")
{
    const auto pr = moderate_profile(37, 3);
    const auto cfg = make_config(32, 0.5, 3, Resolution::bits(1), 5.0, 5.0);
    const long trials = 5000;
    const auto r = simulated_rate(pr, cfg, trials, 10);
    const auto &rec = r.records;
    for (int k = 0; k < 3; ++k)
    {
        std::vector<double> diff(trials), sig(trials);
        for (long t = 0; t < trials; ++t)
        {
            double parts = 0.0;
            for (int j = 0; j < kTermCount; ++j)
                parts += rec.term_power(t, k, static_cast<Term>(j));
            diff[t] = rec.received[rec.at(t, k)] - parts;
            sig[t] = rec.term_power(t, k, Term::signal);
        }
        // Cross terms between the components average out.
        const auto d = make_estimate(diff);
        CHECK(std::abs(d.mean) < 3 * d.std_error);
        // Received minus desired equals the summed noise powers.
        const double lhs = r.received[k].mean - r.A[k].mean;
        const double rhs = r.effective_noise(k);
        const double se = std::hypot(r.received[k].std_error, d.std_error) + r.A[k].std_error;
        CHECK(std::abs(lhs - rhs) < 3 * se);
        // Signal power splits into coherent part plus estimation error.
        const auto se_sig = make_estimate(sig);
        CHECK(std::abs(se_sig.mean - r.A[k].mean - r.B[k].mean) < 3 * se_sig.std_error);
        CHECK_THAT(r.noise[k].mean, WithinRel(1.0, 0.05));
    }
}

TEST_CASE("Single pair has no interference", "[mcsim]")
{
    const auto pr = LargeScaleProfile::from_gains({1.0}, {1.0});
    const auto r = simulated_rate(pr, make_config(16, 0.5, 1, Resolution::bits(2)), 200, 1);
    CHECK(r.C[0].mean < 1e-20);
}

TEST_CASE("Simulated rate agrees with the closed form at M = 128, K = 10", "[mcsim][slow]")
{
    const auto pr = drop_users(2024, 10);
    for (int b : {1, 2})
    {
        const auto cfg = make_config(128, 0.5, 10, Resolution::bits(b), 10.0, 10.0);
        const auto mc = simulated_rate(pr, cfg, 10000, 100 + b);
        const auto ex = exact_rate(pr, cfg);
        CHECK(rel_diff(mc.sum_rate, ex.sum_rate) < 0.05);
        // Users with negligible SINR have |E T_kk| buried in its fluctuation;
        // check the ones that carry the sum rate.
        for (int k = 0; k < 10; ++k)
            if (ex.rate[k] > 0.01 * ex.sum_rate)
                CHECK(rel_diff(mc.sinr[k], ex.sinr[k]) < 0.05);
    }
}

TEST_CASE("Finite-resolution rate stays below the unquantized rate", "[mcsim]")
{
    const auto pr = moderate_profile(41, 4);
    const auto inf = simulated_rate(pr, make_config(64, 0.5, 4, Resolution::infinite(), 10.0, 10.0), 3000, 1);
    double prev_gap = INFINITY;
    for (int b : {1, 2, 3})
    {
        const auto r = simulated_rate(pr, make_config(64, 0.5, 4, Resolution::bits(b), 10.0, 10.0), 3000, 1);
        const double gap = inf.sum_rate - r.sum_rate;
        CHECK(gap >= 0.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("Mean simulated sum rate does not decrease with the high-resolution share", "[mcsim]")
{
    const auto pr = moderate_profile(43, 4);
    double prev = 0.0;
    for (double kappa : {0.0, 0.25, 0.5, 0.75, 1.0})
    {
        double mean = 0.0;
        for (std::uint64_t seed = 0; seed < 4; ++seed)
            mean += simulated_rate(pr, make_config(64, kappa, 4, Resolution::bits(1), 10.0, 10.0), 1000, seed).sum_rate;
        mean /= 4;
        CHECK(mean >= prev);
        prev = mean;
    }
}

TEST_CASE("Results do not depend on the worker count", "[mcsim]")
{
    const auto pr = moderate_profile(47, 3);
    const auto cfg = make_config(32, 0.5, 3, Resolution::bits(2));
    McOptions one, four;
    one.threads = 1;
    four.threads = 4;
    const auto a = simulated_rate(pr, cfg, 500, 3, one);
    const auto b = simulated_rate(pr, cfg, 500, 3, four);
    CHECK(a.sum_rate == b.sum_rate);
    for (int k = 0; k < 3; ++k)
        CHECK(a.G[k].mean == b.G[k].mean);
    CHECK(simulated_rate(pr, cfg, 500, 4, one).sum_rate != a.sum_rate);
}

TEST_CASE("Empirical normalization tracks the closed form", "[mcsim]")
{
    const auto pr = moderate_profile(53, 2);
    const auto cfg = make_config(32, 0.5, 2, Resolution::bits(2));
    McOptions opts;
    opts.gamma_mode = GammaMode::empirical;
    opts.gamma_trials = 20000;
    const auto r = simulated_rate(pr, cfg, 200, 1, opts);
    CHECK_THAT(r.gamma, WithinRel(gamma_norm(pr, cfg), 0.01));
}

TEST_CASE("Under-sampled estimates raise warnings", "[mcsim]")
{
    const auto pr = moderate_profile(59, 3);
    const auto cfg = make_config(16, 0.5, 3, Resolution::bits(1));
    CHECK_FALSE(simulated_rate(pr, cfg, 10, 1).warnings.empty());
    CHECK_THROWS_AS(simulated_rate(pr, cfg, 1, 1), std::invalid_argument);
}

TEST_CASE("Per-trial CSV export", "[mcsim]")
{
    const auto pr = moderate_profile(61, 2);
    const auto cfg = make_config(8, 0.5, 2, Resolution::bits(2));
    const auto r = simulated_rate(pr, cfg, 5, 1);
    std::ostringstream os;
    write_trial_csv(os, r, cfg);
    const auto s = os.str();
    CHECK(s.rfind("trial,k,desired_power,est_error,interference,noise_hi,noise_lo,qn_adc,qn_dac\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 11);
}

TEST_CASE("Estimate helper", "[mcsim]")
{
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto e = make_estimate(v);
    CHECK(e.mean == 2.5);
    CHECK_THAT(e.std_error, WithinRel(std::sqrt(5.0 / 3.0) / 2.0, 1e-14));
    CHECK(e.trials == 4);
    CHECK_THROWS_AS(make_estimate(std::vector<double>{1.0}), std::invalid_argument);
}

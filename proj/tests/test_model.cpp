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

#include "mmrelay/model.hpp"

using namespace mmrelay;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

TEST_CASE("Distortion factor table and high-resolution rule", "[model]")
{
    CHECK(distortion_factor(Resolution::bits(1)) == 0.3634);
    CHECK(distortion_factor(Resolution::bits(2)) == 0.1175);
    CHECK(distortion_factor(Resolution::bits(3)) == 0.03454);
    CHECK(distortion_factor(Resolution::bits(4)) == 0.009497);
    CHECK(distortion_factor(Resolution::bits(5)) == 0.002499);
    CHECK(distortion_factor(Resolution::infinite()) == 0.0);
    CHECK_THAT(distortion_factor(Resolution::bits(8)), WithinRel(2.7206990463513265 * std::pow(2.0, -16), 1e-12));
    CHECK_THAT(distortion_factor(Resolution::bits(8)), WithinRel(4.1515e-5, 1e-4));
}

TEST_CASE("Distortion factor decreases strictly with resolution", "[model]")
{
    for (int b = 1; b < 40; ++b)
        CHECK(distortion_factor(Resolution::bits(b + 1)) < distortion_factor(Resolution::bits(b)));
    CHECK(distortion_factor(Resolution::bits(40)) > distortion_factor(Resolution::infinite()));
}

TEST_CASE("Nonpositive bit counts are rejected", "[model]")
{
    CHECK_THROWS_AS(Resolution::bits(0), std::invalid_argument);
    CHECK_THROWS_AS(Resolution::bits(-3), std::invalid_argument);
    CHECK_THROWS_AS(Resolution::infinite().value(), std::logic_error);
    CHECK(Resolution::infinite().to_string() == "inf");
    CHECK(Resolution::bits(3).to_string() == "3");
}

TEST_CASE("Quantizer gain and distortion add to one, AGC flag off only at one bit", "[model]")
{
    for (int b = 1; b <= 16; ++b)
    {
        const auto q = QuantizerParams::from(Resolution::bits(b));
        CHECK(q.alpha + q.rho == 1.0);
        CHECK(q.c_flag == (b == 1 ? 0 : 1));
    }
    const auto q = QuantizerParams::from(Resolution::infinite());
    CHECK(q.alpha == 1.0);
    CHECK(q.rho == 0.0);
    CHECK(q.c_flag == 1);
}

TEST_CASE("Pre-log factor", "[model]")
{
    const auto base = SystemConfig::Builder{}.users(10).build();
    CHECK(base.tau_c() == 200);
    CHECK(base.tau_p() == 10);
    CHECK_THAT(prelog(base), WithinAbs(0.45, 1e-15));

    CHECK_THAT(prelog(SystemConfig::Builder{}.users(2).coherence(40, 2).build()), WithinAbs(0.45, 1e-15));
    CHECK(prelog(SystemConfig::Builder{}.users(2).coherence(40, 0).build()) == 0.5);
    CHECK_THROWS_AS(SystemConfig::Builder{}.users(2).coherence(20, 10).build(), std::invalid_argument);
}

TEST_CASE("High-resolution antenna count rounds half up and kappa is recomputed", "[model]")
{
    CHECK(SystemConfig::high_res_count(64, 0.5) == 32);
    CHECK(SystemConfig::high_res_count(3, 0.5) == 2);
    CHECK(SystemConfig::high_res_count(5, 0.3) == 2);
    CHECK(SystemConfig::high_res_count(10, 0.25) == 3);
    CHECK(SystemConfig::high_res_count(7, 0.0) == 0);
    CHECK(SystemConfig::high_res_count(7, 1.0) == 7);
    CHECK_THROWS_AS(SystemConfig::high_res_count(7, 1.2), std::invalid_argument);

    for (int M = 1; M <= 100; ++M)
        for (double kappa : {0.0, 0.1, 0.25, 1.0 / 3.0, 0.5, 0.77, 1.0})
        {
            const auto cfg = SystemConfig::Builder{}.antennas(M).kappa(kappa).users(1).build();
            CHECK(cfg.M0() + cfg.M1() == M);
            CHECK(cfg.kappa() * cfg.M() == Catch::Approx(cfg.M0()));
        }
}

TEST_CASE("Configuration invariants are enforced", "[model]")
{
    using B = SystemConfig::Builder;
    CHECK_THROWS_AS(B{}.antennas(0).users(1).build(), std::invalid_argument);
    CHECK_THROWS_AS(B{}.users(0).build(), std::invalid_argument);
    CHECK_THROWS_AS(B{}.users(2).source_power(-1.0).build(), std::invalid_argument);
    CHECK_THROWS_AS(B{}.users(2).relay_power(-1.0).build(), std::invalid_argument);
    CHECK_THROWS_AS(B{}.antennas(8).high_res_antennas(9).users(2).build(), std::invalid_argument);
    CHECK_THROWS_AS(B{}.users(3).source_powers({1.0, 2.0}).build(), std::invalid_argument);
    CHECK_THROWS_AS(B{}.users(2).bandwidth(0.0).build(), std::invalid_argument);
}

TEST_CASE("Unequal ADC and DAC resolutions are stored but refused by the analysis", "[model]")
{
    const auto cfg = SystemConfig::Builder{}.users(2).adc_bits(Resolution::bits(2)).dac_bits(Resolution::bits(4)).build();
    CHECK(cfg.adc().rho == 0.1175);
    CHECK(cfg.dac().rho == 0.009497);
    CHECK_THROWS_AS(cfg.quantizer(), std::invalid_argument);
    CHECK(cfg.with_bits(Resolution::bits(3)).quantizer().rho == 0.03454);
}

TEST_CASE("Copy modifiers keep the original untouched", "[model]")
{
    const auto cfg = SystemConfig::Builder{}.antennas(16).kappa(0.5).users(2).budgets(4.0, 8.0).build();
    const auto scaled = cfg.with_scaled_powers();
    CHECK(scaled.p_S(0) == 4.0 / 16);
    CHECK(scaled.p_R() == 8.0 / 16);
    CHECK(cfg.p_S(0) == 1.0);
    const auto bigger = cfg.with_antennas(32, 8);
    CHECK(bigger.M() == 32);
    CHECK(bigger.M0() == 8);
    CHECK(cfg.M() == 16);
    CHECK(cfg.with_kappa(0.25).M0() == 4);
}

TEST_CASE("dB conversions round-trip", "[model]")
{
    CHECK(db_to_linear(10.0) == Catch::Approx(10.0));
    CHECK(db_to_linear(0.0) == 1.0);
    for (double x : {-30.0, -3.0, 0.0, 7.5, 42.0})
        CHECK_THAT(linear_to_db(db_to_linear(x)), WithinAbs(x, 1e-12));
}

TEST_CASE("Pairwise summation is independent of the input order", "[model]")
{
    std::vector<long double> v;
    for (int i = 0; i < 1000; ++i)
        v.push_back(1.0L / (i + 1));
    const auto s1 = pairwise_sum(v);
    std::reverse(v.begin(), v.end());
    const auto s2 = pairwise_sum(v);
    CHECK(std::abs(double(s1 - s2)) < 1e-15);
}

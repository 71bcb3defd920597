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

// User geometry, large-scale fading and i.i.d. Rayleigh small-scale channels
// with the high/low-resolution row partition of the relay array.

#include "mmrelay/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

namespace mmrelay
{

using cdouble = std::complex<double>;

// ---- seeding -------------------------------------------------------------

// SplitMix64 finalizer. Used only to derive independent engine seeds from
// (master seed, stream id, index) tuples; the engines themselves are std.
inline std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0)
{
    return mix64(mix64(mix64(base) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

// Named sub-streams of one Monte Carlo trial.
enum class Stream : std::uint64_t
{
    geometry = 1,
    channel,
    symbols,
    relay_noise,
    adc_noise,
    dac_noise,
    destination_noise,
    trial,
};

inline std::uint64_t stream_seed(std::uint64_t base, Stream s, std::uint64_t index = 0)
{
    return derive_seed(base, static_cast<std::uint64_t>(s), index);
}

using Engine = std::mt19937_64;

// One draw of CN(0, variance).
inline cdouble complex_gaussian(Engine &eng, double variance = 1.0)
{
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    const double re = n(eng);
    return {re, n(eng)};
}

inline Eigen::VectorXcd complex_gaussian_vector(Engine &eng, Eigen::Index n, double variance = 1.0)
{
    Eigen::VectorXcd v(n);
    std::normal_distribution<double> g(0.0, std::sqrt(variance / 2.0));
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double re = g(eng);
        v[i] = cdouble(re, g(eng));
    }
    return v;
}

// ---- large-scale profile ---------------------------------------------------

struct Geometry
{
    double cell_radius = 1000.0;    // m, hexagon circumradius
    double r_min = 100.0;           // m
    double pathloss_exp = 3.8;      // not to be confused with the quantizer gain
    double shadowing_sigma_db = 8.0;
};

// beta = z * (r / r_min)^(-pathloss_exp)
inline double large_scale_gain(double r, double z, const Geometry &geo = {})
{
    return z * std::pow(r / geo.r_min, -geo.pathloss_exp);
}

struct LargeScaleProfile
{
    std::vector<double> beta_SR;
    std::vector<double> beta_RD;
    // Geometry that produced the gains; NaN when the profile was given directly.
    std::vector<double> r_SR;
    std::vector<double> r_RD;
    std::vector<double> z;
    Geometry geometry;

    int K() const { return static_cast<int>(beta_SR.size()); }

    static LargeScaleProfile from_gains(std::vector<double> beta_SR, std::vector<double> beta_RD)
    {
        if (beta_SR.size() != beta_RD.size() || beta_SR.empty())
            throw std::invalid_argument("LargeScaleProfile: gain vectors must be nonempty and of equal length");
        for (std::size_t k = 0; k < beta_SR.size(); ++k)
            if (!(beta_SR[k] > 0.0) || !(beta_RD[k] > 0.0))
                throw std::invalid_argument("LargeScaleProfile: gains must be positive");
        LargeScaleProfile p;
        const auto nan = std::numeric_limits<double>::quiet_NaN();
        p.r_SR.assign(beta_SR.size(), nan);
        p.r_RD.assign(beta_SR.size(), nan);
        p.z.assign(beta_SR.size(), nan);
        p.beta_SR = std::move(beta_SR);
        p.beta_RD = std::move(beta_RD);
        return p;
    }

    // Multiply every gain by c (both hops).
    LargeScaleProfile scaled(double c) const
    {
        LargeScaleProfile p = *this;
        for (auto &b : p.beta_SR)
            b *= c;
        for (auto &b : p.beta_RD)
            b *= c;
        return p;
    }
};

inline void check_profile(const LargeScaleProfile &profile, const SystemConfig &cfg)
{
    if (profile.K() != cfg.K() || profile.beta_RD.size() != profile.beta_SR.size())
        throw std::invalid_argument("profile has " + std::to_string(profile.K()) + " users, config has " +
                                    std::to_string(cfg.K()));
}

namespace detail
{
inline bool inside_hexagon(double x, double y, double R)
{
    x = std::abs(x);
    y = std::abs(y);
    const double s3 = std::sqrt(3.0);
    return x <= R && y <= s3 / 2.0 * R && s3 * x + y <= s3 * R;
}

// Distance from the relay of a point uniform over the hexagon minus the r_min disk.
inline double drop_distance(Engine &eng, const Geometry &geo)
{
    std::uniform_real_distribution<double> u(-geo.cell_radius, geo.cell_radius);
    for (int attempt = 0; attempt < 1'000'000; ++attempt)
    {
        const double x = u(eng);
        const double y = u(eng);
        const double r = std::hypot(x, y);
        if (r >= geo.r_min && inside_hexagon(x, y, geo.cell_radius))
            return r;
    }
    throw std::runtime_error("drop_users: rejection sampling exceeded 10^6 attempts");
}
} // namespace detail

// K source/destination pairs dropped uniformly in the cell; sources and
// destinations are placed independently, one shadowing draw per pair.
inline LargeScaleProfile drop_users(std::uint64_t seed, int K, const Geometry &geo = {})
{
    if (K < 1)
        throw std::invalid_argument("drop_users: K must be positive");
    Engine eng(stream_seed(seed, Stream::geometry));
    std::normal_distribution<double> n(0.0, 1.0);
    LargeScaleProfile p;
    p.geometry = geo;
    for (int k = 0; k < K; ++k)
    {
        const double r_sr = detail::drop_distance(eng, geo);
        const double r_rd = detail::drop_distance(eng, geo);
        const double z = std::pow(10.0, geo.shadowing_sigma_db * n(eng) / 10.0);
        p.r_SR.push_back(r_sr);
        p.r_RD.push_back(r_rd);
        p.z.push_back(z);
        p.beta_SR.push_back(large_scale_gain(r_sr, z, geo));
        p.beta_RD.push_back(large_scale_gain(r_rd, z, geo));
    }
    return p;
}

// CSV: k, r_SR, r_RD, z, beta_SR, beta_RD
inline void write_profile_csv(std::ostream &os, const LargeScaleProfile &p)
{
    const auto old = os.precision(9);
    os << "k,r_SR,r_RD,z,beta_SR,beta_RD\n";
    for (int k = 0; k < p.K(); ++k)
        os << k << ',' << p.r_SR[k] << ',' << p.r_RD[k] << ',' << p.z[k] << ',' << p.beta_SR[k] << ','
           << p.beta_RD[k] << '\n';
    os.precision(old);
}

// ---- small-scale realization ----------------------------------------------

struct ChannelRealization
{
    Eigen::MatrixXcd G_SR; // M x K, sources -> relay
    Eigen::MatrixXcd G_RD; // M x K, relay -> destinations (transposed on use)
    int M0 = 0;            // top M0 rows sit on high-resolution converters

    int M() const { return static_cast<int>(G_SR.rows()); }
    int M1() const { return M() - M0; }

    auto SR0() const { return G_SR.topRows(M0); }
    auto SR1() const { return G_SR.bottomRows(M1()); }
    auto RD0() const { return G_RD.topRows(M0); }
    auto RD1() const { return G_RD.bottomRows(M1()); }
};

// Fresh i.i.d. realization: column k of G_SR ~ CN(0, beta_SR,k I_M), same for G_RD.
inline ChannelRealization draw_channel(std::uint64_t seed, const LargeScaleProfile &profile, const SystemConfig &cfg)
{
    check_profile(profile, cfg);
    Engine eng(seed);
    const int M = cfg.M();
    const int K = cfg.K();
    ChannelRealization ch;
    ch.M0 = cfg.M0();
    ch.G_SR.resize(M, K);
    ch.G_RD.resize(M, K);
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    for (int k = 0; k < K; ++k)
    {
        const double s = std::sqrt(profile.beta_SR[k]);
        for (int m = 0; m < M; ++m)
        {
            const double re = n(eng);
            ch.G_SR(m, k) = s * cdouble(re, n(eng));
        }
    }
    for (int k = 0; k < K; ++k)
    {
        const double s = std::sqrt(profile.beta_RD[k]);
        for (int m = 0; m < M; ++m)
        {
            const double re = n(eng);
            ch.G_RD(m, k) = s * cdouble(re, n(eng));
        }
    }
    return ch;
}

} // namespace mmrelay

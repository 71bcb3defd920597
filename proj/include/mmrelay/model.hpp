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

// System configuration, quantizer parameters and the small numeric helpers
// shared by every other part of the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmrelay
{

// Order-independent, extended-precision summation. Pairwise reduction over
// long double keeps the dual-form rate identities meaningful at 1e-9.
inline long double pairwise_sum(std::span<const long double> v)
{
    if (v.size() <= 8)
    {
        long double s = 0.0L;
        for (auto x : v)
            s += x;
        return s;
    }
    const auto half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Sum f(0) + ... + f(n-1) with pairwise long double accumulation.
template <typename F>
long double accurate_sum(std::size_t n, F &&f)
{
    std::vector<long double> terms(n);
    for (std::size_t i = 0; i < n; ++i)
        terms[i] = static_cast<long double>(f(i));
    return pairwise_sum(terms);
}

// Quantizer resolution in bits, or the unquantized limit.
class Resolution
{
  public:
    static Resolution bits(int b)
    {
        if (b < 1)
            throw std::invalid_argument("Resolution: quantizer needs at least 1 bit, got " + std::to_string(b));
        return Resolution(b);
    }
    static Resolution infinite() { return Resolution(0); }

    bool is_infinite() const { return bits_ == 0; }

    // Number of bits; throws for the unquantized resolution.
    int value() const
    {
        if (is_infinite())
            throw std::logic_error("Resolution: infinite resolution has no bit count");
        return bits_;
    }

    std::string to_string() const { return is_infinite() ? std::string("inf") : std::to_string(bits_); }

    friend bool operator==(const Resolution &, const Resolution &) = default;

  private:
    explicit Resolution(int b) : bits_(b) {}
    int bits_; // 0 encodes "infinite"
};

// Mean-square distortion of a b-bit scalar quantizer (Lloyd-Max values for
// b <= 5, high-resolution approximation above, zero when unquantized).
inline double distortion_factor(Resolution b)
{
    static constexpr double table[] = {0.3634, 0.1175, 0.03454, 0.009497, 0.002499};
    if (b.is_infinite())
        return 0.0;
    const int n = b.value();
    if (n <= 5)
        return table[n - 1];
    return std::numbers::pi * std::sqrt(3.0) / 2.0 * std::ldexp(1.0, -2 * n);
}

// Additive quantization noise model parameters for one converter class.
struct QuantizerParams
{
    double rho = 0.0;   // distortion factor
    double alpha = 1.0; // linear gain, 1 - rho
    int c_flag = 1;     // AGC flag of the power model: 0 only for 1-bit converters

    static QuantizerParams from(Resolution b)
    {
        QuantizerParams q;
        q.rho = distortion_factor(b);
        q.alpha = 1.0 - q.rho;
        q.c_flag = (!b.is_infinite() && b.value() == 1) ? 0 : 1;
        return q;
    }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Immutable description of one relaying scenario. Powers are linear and
// normalized to unit noise variance. Built through SystemConfig::Builder.
class SystemConfig
{
  public:
    class Builder;

    int M() const { return M_; }
    int M0() const { return M0_; }
    int M1() const { return M_ - M0_; }
    int K() const { return static_cast<int>(p_S_.size()); }
    double kappa() const { return static_cast<double>(M0_) / M_; }

    Resolution adc_bits() const { return adc_bits_; }
    Resolution dac_bits() const { return dac_bits_; }
    QuantizerParams adc() const { return QuantizerParams::from(adc_bits_); }
    QuantizerParams dac() const { return QuantizerParams::from(dac_bits_); }

    // Shared quantizer used by the closed-form analysis, which assumes
    // identical ADC and DAC resolution.
    QuantizerParams quantizer() const
    {
        if (!(adc_bits_ == dac_bits_))
            throw std::invalid_argument("SystemConfig: closed-form analysis needs equal ADC and DAC resolution");
        return adc();
    }

    const std::vector<double> &p_S() const { return p_S_; }
    double p_S(int k) const { return p_S_.at(static_cast<std::size_t>(k)); }
    double p_R() const { return p_R_; }
    int tau_c() const { return tau_c_; }
    int tau_p() const { return tau_p_; }
    double E_S() const { return E_S_; }
    double E_R() const { return E_R_; }
    double bandwidth_hz() const { return bandwidth_hz_; }

    // Copies with one aspect changed; all invariants are re-checked.
    SystemConfig with_antennas(int M, int M0) const
    {
        SystemConfig c = *this;
        c.M_ = M;
        c.M0_ = M0;
        c.validate();
        return c;
    }
    SystemConfig with_kappa(double kappa) const { return with_antennas(M_, high_res_count(M_, kappa)); }
    SystemConfig with_bits(Resolution b) const
    {
        SystemConfig c = *this;
        c.adc_bits_ = b;
        c.dac_bits_ = b;
        return c;
    }
    SystemConfig with_powers(std::vector<double> p_S, double p_R) const
    {
        SystemConfig c = *this;
        c.p_S_ = std::move(p_S);
        c.p_R_ = p_R;
        c.validate();
        return c;
    }
    SystemConfig with_budgets(double E_S, double E_R) const
    {
        SystemConfig c = *this;
        c.E_S_ = E_S;
        c.E_R_ = E_R;
        c.validate();
        return c;
    }
    // Power-scaling operating point: every source at E_S/M, relay at E_R/M.
    SystemConfig with_scaled_powers() const
    {
        return with_powers(std::vector<double>(p_S_.size(), E_S_ / M_), E_R_ / M_);
    }

    // M0 = round(kappa * M), ties rounded up.
    static int high_res_count(int M, double kappa)
    {
        if (!(kappa >= 0.0 && kappa <= 1.0))
            throw std::invalid_argument("SystemConfig: kappa must lie in [0, 1]");
        return static_cast<int>(std::floor(kappa * M + 0.5));
    }

  private:
    SystemConfig() = default;

    void validate() const
    {
        if (M_ < 1)
            throw std::invalid_argument("SystemConfig: M must be positive");
        if (M0_ < 0 || M0_ > M_)
            throw std::invalid_argument("SystemConfig: M0 must lie in [0, M]");
        if (p_S_.empty())
            throw std::invalid_argument("SystemConfig: K must be positive");
        for (double p : p_S_)
            if (!(p >= 0.0) || !std::isfinite(p))
                throw std::invalid_argument("SystemConfig: source powers must be finite and nonnegative");
        if (!(p_R_ >= 0.0) || !std::isfinite(p_R_))
            throw std::invalid_argument("SystemConfig: relay power must be finite and nonnegative");
        if (!(E_S_ >= 0.0) || !(E_R_ >= 0.0))
            throw std::invalid_argument("SystemConfig: power budgets must be nonnegative");
        if (tau_p_ < 0 || tau_c_ <= 2 * tau_p_)
            throw std::invalid_argument("SystemConfig: need tau_c > 2 tau_p >= 0");
        if (!(bandwidth_hz_ > 0.0))
            throw std::invalid_argument("SystemConfig: bandwidth must be positive");
    }

    int M_ = 1;
    int M0_ = 0;
    Resolution adc_bits_ = Resolution::infinite();
    Resolution dac_bits_ = Resolution::infinite();
    std::vector<double> p_S_;
    double p_R_ = 0.0;
    int tau_c_ = 20;
    int tau_p_ = 1;
    double E_S_ = 0.0;
    double E_R_ = 0.0;
    double bandwidth_hz_ = 20e6;
};

class SystemConfig::Builder
{
  public:
    Builder &antennas(int M)
    {
        M_ = M;
        return *this;
    }
    Builder &kappa(double k)
    {
        kappa_ = k;
        M0_ = -1;
        return *this;
    }
    Builder &high_res_antennas(int M0)
    {
        M0_ = M0;
        return *this;
    }
    Builder &users(int K)
    {
        K_ = K;
        return *this;
    }
    Builder &bits(Resolution b)
    {
        adc_ = b;
        dac_ = b;
        return *this;
    }
    Builder &adc_bits(Resolution b)
    {
        adc_ = b;
        return *this;
    }
    Builder &dac_bits(Resolution b)
    {
        dac_ = b;
        return *this;
    }
    Builder &source_power(double p)
    {
        p_uniform_ = p;
        p_S_.clear();
        return *this;
    }
    Builder &source_powers(std::vector<double> p)
    {
        p_S_ = std::move(p);
        return *this;
    }
    Builder &relay_power(double p)
    {
        p_R_ = p;
        return *this;
    }
    Builder &coherence(int tau_c, int tau_p)
    {
        tau_c_ = tau_c;
        tau_p_ = tau_p;
        return *this;
    }
    Builder &budgets(double E_S, double E_R)
    {
        E_S_ = E_S;
        E_R_ = E_R;
        return *this;
    }
    Builder &bandwidth(double hz)
    {
        bandwidth_ = hz;
        return *this;
    }

    SystemConfig build() const
    {
        SystemConfig c;
        c.M_ = M_;
        c.M0_ = M0_ >= 0 ? M0_ : high_res_count(M_, kappa_);
        if (!p_S_.empty())
        {
            if (K_ > 0 && static_cast<int>(p_S_.size()) != K_)
                throw std::invalid_argument("SystemConfig: source power vector length differs from K");
            c.p_S_ = p_S_;
        }
        else
        {
            if (K_ < 1)
                throw std::invalid_argument("SystemConfig: K must be positive");
            c.p_S_.assign(static_cast<std::size_t>(K_), p_uniform_);
        }
        const int K = static_cast<int>(c.p_S_.size());
        c.p_R_ = p_R_;
        c.adc_bits_ = adc_;
        c.dac_bits_ = dac_;
        // Default coherence structure: tau_c = 20K, tau_p = K.
        c.tau_c_ = tau_c_ > 0 ? tau_c_ : 20 * K;
        c.tau_p_ = tau_c_ > 0 ? tau_p_ : K;
        c.E_S_ = E_S_;
        c.E_R_ = E_R_;
        c.bandwidth_hz_ = bandwidth_;
        c.validate();
        return c;
    }

  private:
    int M_ = 64;
    int M0_ = -1;
    double kappa_ = 0.5;
    int K_ = 0;
    Resolution adc_ = Resolution::infinite();
    Resolution dac_ = Resolution::infinite();
    std::vector<double> p_S_;
    double p_uniform_ = 1.0;
    double p_R_ = 1.0;
    int tau_c_ = 0;
    int tau_p_ = 0;
    double E_S_ = 1.0;
    double E_R_ = 1.0;
    double bandwidth_ = 20e6;
};

// Pre-log factor (tau_c - 2 tau_p) / (2 tau_c): half-duplex and pilot overhead.
inline double prelog(const SystemConfig &cfg)
{
    return static_cast<double>(cfg.tau_c() - 2 * cfg.tau_p()) / (2.0 * cfg.tau_c());
}

} // namespace mmrelay

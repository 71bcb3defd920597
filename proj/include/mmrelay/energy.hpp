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

// Front-end power consumption and energy efficiency of the mixed-resolution
// relay. Circuit-block powers are in watts.

#include "mmrelay/rate.hpp"

#include <cmath>
#include <stdexcept>

namespace mmrelay
{

// Converter constants. Supply, LSB current, switch parasitics, channel
// length and 1/f corner follow the usual converter-survey values.
struct ConverterConstants
{
    double V_dd = 3.0;      // V
    double I_0 = 10e-6;     // A
    double C_p = 1e-12;     // F
    double L_min = 0.5e-6;  // m
    double f_cor = 1e6;     // Hz
};

struct PowerModel
{
    double P_mix = 30.3e-3;
    double P_filt = 2.5e-3;
    double P_filr = 2.5e-3;
    double P_syn = 50.0e-3;
    double P_LNA = 20e-3;
    double P_IFA = 3e-3;
    double P_AGC = 2e-3;
    ConverterConstants converter;
    double bandwidth_hz = 20e6;
    int b_high = 12; // resolution of the high-resolution converters

    void validate() const
    {
        for (double x : {P_mix, P_filt, P_filr, P_syn, P_LNA, P_IFA, P_AGC, converter.V_dd, converter.I_0,
                         converter.C_p, converter.L_min, converter.f_cor})
            if (!(x >= 0.0) || !std::isfinite(x))
                throw std::invalid_argument("PowerModel: entries must be finite and nonnegative");
        if (!(bandwidth_hz > 0.0))
            throw std::invalid_argument("PowerModel: bandwidth must be positive");
        if (b_high < 1)
            throw std::invalid_argument("PowerModel: b_high must be at least 1");
    }

    // Every circuit-block power multiplied by s (converter constants included).
    PowerModel scaled(double s) const
    {
        PowerModel m = *this;
        for (double *x : {&m.P_mix, &m.P_filt, &m.P_filr, &m.P_syn, &m.P_LNA, &m.P_IFA, &m.P_AGC})
            *x *= s;
        // Both converter formulas are linear in I_0 V_dd and C_p V_dd^2 (resp. L_min V_dd^2).
        m.converter.I_0 *= s;
        m.converter.C_p *= s;
        m.converter.L_min *= s;
        return m;
    }
};

// Binary-weighted current-steering DAC.
inline double p_dac(int b, const PowerModel &m = {})
{
    if (b < 1)
        throw std::invalid_argument("p_dac: need at least 1 bit");
    const auto &c = m.converter;
    return 0.5 * c.V_dd * c.I_0 * (std::ldexp(1.0, b) - 1.0) +
           b * c.C_p * (2.0 * m.bandwidth_hz + c.f_cor) * c.V_dd * c.V_dd;
}

// CMOS Nyquist-rate ADC figure-of-merit model.
inline double p_adc(int b, const PowerModel &m = {})
{
    if (b < 1)
        throw std::invalid_argument("p_adc: need at least 1 bit");
    const auto &c = m.converter;
    return 3.0 * c.V_dd * c.V_dd * c.L_min * (2.0 * m.bandwidth_hz + c.f_cor) / std::pow(10.0, -0.1525 * b + 4.838);
}

struct PowerBreakdown
{
    double rf_chains = 0.0;     // M (P_mix + P_filt) + M (P_LNA + P_mix + P_IFA + P_filr)
    double synthesizers = 0.0;  // 2 P_syn
    double agc = 0.0;           // 2 M1 c P_AGC + 2 M0 P_AGC
    double adc = 0.0;           // M0 P_ADC^H + M1 P_ADC^L
    double dac = 0.0;           // M0 P_DAC^H + M1 P_DAC^L

    double total() const { return rf_chains + synthesizers + agc + adc + dac; }
};

inline PowerBreakdown power_breakdown(const SystemConfig &cfg, const PowerModel &m, int b_low)
{
    m.validate();
    if (b_low < 1 || b_low > m.b_high)
        throw std::invalid_argument("power_breakdown: need 1 <= b_low <= b_high");
    const double M = cfg.M(), M0 = cfg.M0(), M1 = cfg.M1();
    const double c = QuantizerParams::from(Resolution::bits(b_low)).c_flag;
    PowerBreakdown p;
    p.rf_chains = M * (m.P_mix + m.P_filt) + M * (m.P_LNA + m.P_mix + m.P_IFA + m.P_filr);
    p.synthesizers = 2.0 * m.P_syn;
    p.agc = M1 * c * m.P_AGC + M0 * m.P_AGC + M1 * c * m.P_AGC + M0 * m.P_AGC;
    p.adc = M0 * p_adc(m.b_high, m) + M1 * p_adc(b_low, m);
    p.dac = M0 * p_dac(m.b_high, m) + M1 * p_dac(b_low, m);
    return p;
}

inline double total_power(const SystemConfig &cfg, const PowerModel &m, int b_low)
{
    return power_breakdown(cfg, m, b_low).total();
}

// Low-resolution bit count of a configuration; the unquantized case has none.
inline int low_resolution_bits(const SystemConfig &cfg)
{
    cfg.quantizer();
    if (cfg.adc_bits().is_infinite())
        throw std::invalid_argument("energy model needs a finite low-resolution bit count");
    return cfg.adc_bits().value();
}

// Bits per joule: exact closed-form sum rate times bandwidth over total power.
inline double energy_efficiency(const LargeScaleProfile &profile, const SystemConfig &cfg, const PowerModel &m)
{
    const double P = total_power(cfg, m, low_resolution_bits(cfg));
    if (!(P > 0.0))
        throw std::domain_error("energy_efficiency: total power must be positive");
    return exact_rate(profile, cfg).sum_rate * m.bandwidth_hz / P;
}

} // namespace mmrelay

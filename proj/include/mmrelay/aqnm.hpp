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

// Additive quantization noise model for the low-resolution ADCs (receive)
// and DACs (transmit). The top M0 entries pass through untouched.

#include "mmrelay/channel.hpp"

namespace mmrelay
{

struct QuantizedRx
{
    Eigen::VectorXcd y_tilde;    // M
    Eigen::VectorXcd n_qa;       // M1 quantization noise draw
    Eigen::VectorXd R_nqa_diag;  // M1 per-antenna noise variances
};

struct QuantizedTx
{
    Eigen::VectorXcd x_tilde;    // M
    Eigen::VectorXcd n_qd;       // M1
    Eigen::VectorXd R_nqd_diag;  // M1
};

// [y_R0; alpha y_R1 + n_qa] with n_qa ~ CN(0, alpha rho diag(G_SR1 P_S G_SR1^H + I)),
// the covariance being conditioned on the channel realization.
inline QuantizedRx quantize_rx(const Eigen::VectorXcd &y_R, const ChannelRealization &ch, const SystemConfig &cfg,
                               std::uint64_t seed)
{
    const int M0 = cfg.M0();
    const int M1 = cfg.M1();
    if (y_R.size() != cfg.M() || ch.M() != cfg.M() || ch.M0 != M0)
        throw std::invalid_argument("quantize_rx: dimensions do not match the configuration");
    const auto q = cfg.adc();

    QuantizedRx out;
    out.y_tilde = y_R;
    out.R_nqa_diag = Eigen::VectorXd::Zero(M1);
    out.n_qa = Eigen::VectorXcd::Zero(M1);
    if (M1 == 0 || q.rho == 0.0)
        return out;

    const auto G1 = ch.SR1();
    Engine eng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int m = 0; m < M1; ++m)
    {
        double rx_power = 1.0;
        for (int k = 0; k < cfg.K(); ++k)
            rx_power += cfg.p_S(k) * std::norm(G1(m, k));
        const double var = q.alpha * q.rho * rx_power;
        const double sd = std::sqrt(var / 2.0);
        const double re = n(eng);
        out.R_nqa_diag[m] = var;
        out.n_qa[m] = cdouble(sd * re, sd * n(eng));
    }
    out.y_tilde.tail(M1) = q.alpha * y_R.tail(M1) + out.n_qa;
    return out;
}

// [x_R0; alpha x_R1 + n_qd]. The m-th DAC noise variance is alpha rho |x_R1,m|^2,
// the instantaneous surrogate of diag(R_xR1) whose mean is alpha rho mu.
inline QuantizedTx quantize_tx(const Eigen::VectorXcd &x_R, const SystemConfig &cfg, std::uint64_t seed)
{
    const int M1 = cfg.M1();
    if (x_R.size() != cfg.M())
        throw std::invalid_argument("quantize_tx: dimensions do not match the configuration");
    const auto q = cfg.dac();

    QuantizedTx out;
    out.x_tilde = x_R;
    out.R_nqd_diag = Eigen::VectorXd::Zero(M1);
    out.n_qd = Eigen::VectorXcd::Zero(M1);
    if (M1 == 0 || q.rho == 0.0)
        return out;

    Engine eng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    const auto x1 = x_R.tail(M1);
    for (int m = 0; m < M1; ++m)
    {
        const double var = q.alpha * q.rho * std::norm(x1[m]);
        const double sd = std::sqrt(var / 2.0);
        const double re = n(eng);
        out.R_nqd_diag[m] = var;
        out.n_qd[m] = cdouble(sd * re, sd * n(eng));
    }
    out.x_tilde.tail(M1) = q.alpha * x1 + out.n_qd;
    return out;
}

} // namespace mmrelay

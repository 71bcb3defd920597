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

// Shared fixtures for the unit tests.

#include "mmrelay/model.hpp"
#include "mmrelay/channel.hpp"
#include "mmrelay/validation.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace mmrelay::testing
{

using validation::rel_diff;

// Gains of order one: the regime where finite-M statistics are well behaved.
inline LargeScaleProfile moderate_profile(std::uint64_t seed, int K, double lo = 0.3, double hi = 1.5)
{
    return validation::uniform_gains(seed, K, lo, hi);
}

inline SystemConfig make_config(int M, double kappa, int K, Resolution b, double p_S = 1.0, double p_R = 1.0)
{
    return SystemConfig::Builder{}.antennas(M).kappa(kappa).users(K).bits(b).source_power(p_S).relay_power(p_R).build();
}

// Random configuration spanning the full parameter space, for property tests.
using RandomCase = validation::Scenario;

inline RandomCase random_case(std::uint64_t seed) { return validation::random_scenario(seed); }

} // namespace mmrelay::testing

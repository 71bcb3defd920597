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

// Umbrella header for the mmrelay library.

#include "mmrelay/model.hpp"
#include "mmrelay/channel.hpp"
#include "mmrelay/aqnm.hpp"
#include "mmrelay/mcsim.hpp"
#include "mmrelay/rate.hpp"
#include "mmrelay/gp.hpp"
#include "mmrelay/alloc.hpp"
#include "mmrelay/energy.hpp"
#include "mmrelay/oracle.hpp"
#include "mmrelay/csv.hpp"
#include "mmrelay/validation.hpp"

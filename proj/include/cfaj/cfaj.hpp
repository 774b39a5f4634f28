// SPDX-License-Identifier: Apache-2.0
//
// cfaj - anti-jamming beamforming for downlink cell-free mmWave MIMO
// Copyright (C) 2026 The cfaj authors
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

#ifndef CFAJ_CFAJ_HPP
#define CFAJ_CFAJ_HPP

#include "linalg.hpp"
#include "scene.hpp"
#include "matrix_io.hpp"
#include "priors.hpp"
#include "receive.hpp"
#include "transmit.hpp"
#include "hybrid.hpp"
#include "ao.hpp"
#include "wmmse.hpp"
#include "sdr_export.hpp"
#include "dumps.hpp"
#include "config.hpp"
#include "stats.hpp"
#include "svg.hpp"
#include "harness.hpp"

#endif

// SPDX-License-Identifier: Apache-2.0
//
// lsmimo - large-scale MIMO array covariance and interference filtering toolkit
// Copyright (C) 2025-2026 The lsmimo developers
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

#ifndef lsmimo_H
#define lsmimo_H

#include "common.hpp"
#include "rng.hpp"
#include "quadrature.hpp"
#include "scenario.hpp"
#include "channel.hpp"
#include "covariance.hpp"
#include "estimation.hpp"
#include "filtering.hpp"
#include "csv.hpp"
#include "experiments.hpp"

#endif

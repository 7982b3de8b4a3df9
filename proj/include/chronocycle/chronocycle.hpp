// Copyright 2026 The chronocycle Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "chronocycle/chain.hpp"
#include "chronocycle/embedding.hpp"
#include "chronocycle/error.hpp"
#include "chronocycle/filtration.hpp"
#include "chronocycle/io.hpp"
#include "chronocycle/lp.hpp"
#include "chronocycle/optimizer.hpp"
#include "chronocycle/pipeline.hpp"
#include "chronocycle/reduction.hpp"
#include "chronocycle/rips.hpp"
#include "chronocycle/simplex.hpp"
#include "chronocycle/simplex_solver.hpp"
#include "chronocycle/weights.hpp"

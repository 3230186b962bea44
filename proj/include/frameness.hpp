// Copyright 2026 The frameness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "frameness/asymptotic.hpp"
#include "frameness/channels.hpp"
#include "frameness/error.hpp"
#include "frameness/half_int.hpp"
#include "frameness/json_io.hpp"
#include "frameness/measures.hpp"
#include "frameness/monotones.hpp"
#include "frameness/simplex.hpp"
#include "frameness/singlecopy.hpp"
#include "frameness/states.hpp"
#include "frameness/wigner.hpp"

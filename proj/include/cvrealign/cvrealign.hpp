// Copyright 2026 The cvrealign Authors
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

#include "cvrealign/criteria.hpp"
#include "cvrealign/errors.hpp"
#include "cvrealign/evolution.hpp"
#include "cvrealign/fock_oracle.hpp"
#include "cvrealign/gaussian_core.hpp"
#include "cvrealign/linalg.hpp"
#include "cvrealign/paired_sum.hpp"
#include "cvrealign/paired_sum_oracle.hpp"
#include "cvrealign/sweep.hpp"
#include "cvrealign/verdict.hpp"

// Copyright 2026 The tnsim Authors
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

#include "tnsim/amplitude.hpp"
#include "tnsim/circuit.hpp"
#include "tnsim/circuit_io.hpp"
#include "tnsim/network.hpp"
#include "tnsim/oracle.hpp"
#include "tnsim/path_search.hpp"
#include "tnsim/score.hpp"
#include "tnsim/tensor.hpp"
#include "tnsim/tns.hpp"
#include "tnsim/workload.hpp"

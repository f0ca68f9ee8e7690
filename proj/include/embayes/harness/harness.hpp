// Copyright 2025 The Embayes Authors.
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

#ifndef EMBAYES_HARNESS_HARNESS_HPP_
#define EMBAYES_HARNESS_HARNESS_HPP_

#include "embayes/harness/experiment.hpp"
#include "embayes/harness/rng.hpp"
#include "embayes/harness/scan.hpp"
#include "embayes/harness/serialize.hpp"
#include "embayes/harness/tail.hpp"

#endif  // EMBAYES_HARNESS_HARNESS_HPP_

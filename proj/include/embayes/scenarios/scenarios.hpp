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

#ifndef EMBAYES_SCENARIOS_SCENARIOS_HPP_
#define EMBAYES_SCENARIOS_SCENARIOS_HPP_

#include "embayes/equilibria/dogmatic.hpp"
#include "embayes/scenarios/mu_rk.hpp"
#include "embayes/scenarios/pd.hpp"
#include "embayes/scenarios/perturb.hpp"
#include "embayes/scenarios/see_not_ee.hpp"

namespace embayes {
namespace scenarios {

// the dogmatic construction lives beside its best-response checker; it is
// addressable as a scenario all the same
using embayes::dogmatic_best_response_check;
using embayes::dogmatic_mixture;
using embayes::DogmaticUniverse;

}  // namespace scenarios
}  // namespace embayes

#endif  // EMBAYES_SCENARIOS_SCENARIOS_HPP_

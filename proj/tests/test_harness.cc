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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "embayes/harness/harness.hpp"
#include "embayes/scenarios/scenarios.hpp"

namespace {

using embayes::History;
using embayes::Rational;

TEST_CASE("harness headers smoke") {
  auto sc = embayes::scenarios::make_twin_pd<Rational>(Rational(2, 5), 2);
  embayes::harness::SelfPlaySpec<Rational> spec;
  spec.sigma = sc.stage;
  auto tasks = sc.tasks();
  for (int i = 0; i < 2; ++i) {
    embayes::harness::AgentSpec<Rational> a;
    a.kind = embayes::harness::AgentKind::kEmbeddedBr;
    a.mixture = sc.belief;
    a.task = tasks[i];
    spec.seats.push_back(a);
  }
  spec.rounds = 3;
  auto run = embayes::harness::run_self_play(spec);
  CHECK(run.record.rounds() == 3);
}

}  // namespace

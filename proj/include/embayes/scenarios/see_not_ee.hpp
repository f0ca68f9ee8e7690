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

#ifndef EMBAYES_SCENARIOS_SEE_NOT_EE_HPP_
#define EMBAYES_SCENARIOS_SEE_NOT_EE_HPP_

#include <memory>
#include <string>
#include <vector>

#include "embayes/core/dist.hpp"
#include "embayes/core/environment.hpp"
#include "embayes/core/policy.hpp"
#include "embayes/core/universe.hpp"
#include "embayes/equilibria/game.hpp"

namespace embayes {
namespace scenarios {

// A profile that is subjectively stable yet objectively completable by no
// single dependency kernel. Always-A is held up by reaction beliefs that
// price every deviation at 1 against an equilibrium payoff of 2, while the
// deviation rows force any compatible joint distribution onto the point mass.
// Note the BB/BC/CB/CC block is deliberately not seat-symmetric.
template <class S>
NormalFormGame<S> see_not_ee_game() {
  NormalFormGame<S> g;
  g.name = "see_not_ee";
  g.actions = {Alphabet({"A", "B", "C"}), Alphabet({"A", "B", "C"})};
  g.payoff = {{S(2), S(0), S(0), S(7), S(6), S(1), S(7), S(1), S(6)},
              {S(2), S(7), S(7), S(0), S(1), S(6), S(0), S(6), S(1)}};
  return g;
}

// deviation -> the co-action the seat imagines it would provoke, every round
template <class S>
EnvironmentPtr<S> reaction_environment(const PersonalGameView<S>& view,
                                       const JointIndexer& idx, int player,
                                       std::vector<int> react,
                                       const std::string& name) {
  if (static_cast<int>(react.size()) != view.space.actions.size()) {
    throw AlphabetMismatch("one reaction per own action");
  }
  auto fn = [view, idx, player, react](const History&, int a) {
    std::vector<int> joint(2);
    joint[player] = a;
    joint[1 - player] = react[a];
    return Dist<S>::point(view.space.percepts.size(),
                          view.percept_of_joint[idx.flat(joint)]);
  };
  return std::make_shared<FnEnvironment<S>>(view.space, fn, name);
}

template <class S>
struct SeeNotEeScenario {
  NormalFormGame<S> game;
  std::vector<PersonalGameView<S>> views;
  MultiAgentEnvPtr<S> stage;
  std::vector<PolicyPtr<S>> policies;   // always A
  std::vector<UniversePtr<S>> beliefs;  // truth tables plus reaction completions

  std::vector<DiscountedTask<S>> tasks() const {
    return {views[0].task, views[1].task};
  }
};

// belief depth must cover whatever horizon the checks run at
template <class S>
SeeNotEeScenario<S> make_see_not_ee(const S& gamma = ScalarTraits<S>::zero(),
                                    int depth = 8) {
  SeeNotEeScenario<S> sc;
  sc.game = see_not_ee_game<S>();
  sc.views = personal_game_views(sc.game, gamma);
  sc.stage = game_multiagent_env(sc.game, sc.views);
  JointIndexer idx = sc.game.indexer();
  // seat 0 imagines B met by C and C by B; seat 1 imagines its deviation
  // matched in kind
  const std::vector<std::vector<int>> react = {{0, 2, 1}, {0, 1, 2}};
  for (int i = 0; i < 2; ++i) {
    PolicyPtr<S> pi = constant_policy<S>(sc.views[i].space, 0, "always_a");
    EnvironmentPtr<S> nu =
        reaction_environment(sc.views[i], idx, i, react[i],
                             "reaction" + std::to_string(i));
    sc.policies.push_back(pi);
    auto belief = TableUniverse<S>::from_conditionals(
        sc.views[i].space, depth,
        [&pi](const History& h) { return pi->act(h); },
        [&nu](const History& h, int a) { return nu->per(h, a); },
        "see_belief" + std::to_string(i));
    belief->set_completion(std::make_shared<PairCompletion<S>>(pi, nu));
    sc.beliefs.push_back(belief);
  }
  return sc;
}

}  // namespace scenarios
}  // namespace embayes

#endif  // EMBAYES_SCENARIOS_SEE_NOT_EE_HPP_

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

#ifndef EMBAYES_EQUILIBRIA_DEPENDENCY_HPP_
#define EMBAYES_EQUILIBRIA_DEPENDENCY_HPP_

#include <utility>
#include <vector>

#include "embayes/core/dist.hpp"
#include "embayes/equilibria/game.hpp"

namespace embayes {

// Joint action distribution together with, per player and per own action, a
// completion of the conditional co-profile distribution. The completion is
// the object that decides what a player expects after an action the joint
// distribution never plays; where the marginal is positive it must reproduce
// the exact conditional.
template <class S>
struct DependencyDistribution {
  std::vector<S> p;  // dense over flat joint profiles
  // completion[player][own action][flat co-profile]
  std::vector<std::vector<std::vector<S>>> completion;

  S marginal(const JointIndexer& idx, int player, int own) const {
    S m = ScalarTraits<S>::zero();
    for (int co = 0; co < idx.co_count(player); ++co) {
      m += p[idx.flat(idx.with_own(player, own, idx.co_unflat(player, co)))];
    }
    return m;
  }

  // co-profile conditional given own action, falling back to the completion
  // exactly when the marginal vanishes
  std::vector<S> co_conditional(const JointIndexer& idx, int player,
                                int own) const {
    S m = marginal(idx, player, own);
    if (m == 0) return completion[player][own];
    std::vector<S> cond(idx.co_count(player));
    for (int co = 0; co < idx.co_count(player); ++co) {
      cond[co] =
          p[idx.flat(idx.with_own(player, own, idx.co_unflat(player, co)))] / m;
    }
    return cond;
  }

  void validate(const NormalFormGame<S>& g, double slack = 0.0) const {
    JointIndexer idx = g.indexer();
    if (static_cast<int>(p.size()) != idx.count()) {
      throw AlphabetMismatch(g.name + ": dependency table size mismatch");
    }
    S total = ScalarTraits<S>::zero();
    for (const auto& v : p) {
      if (v < 0) throw SupportViolation(g.name + ": negative joint mass");
      total += v;
    }
    if (to_double<S>(abs_val<S>(total - ScalarTraits<S>::one())) > slack) {
      throw SupportViolation(g.name + ": joint masses must sum to 1");
    }
    if (static_cast<int>(completion.size()) != g.players()) {
      throw InconsistentCompletion(g.name + ": one completion per player");
    }
    for (int i = 0; i < g.players(); ++i) {
      if (static_cast<int>(completion[i].size()) != idx.size(i)) {
        throw InconsistentCompletion(g.name + ": one completion row per action");
      }
      for (int own = 0; own < idx.size(i); ++own) {
        const auto& row = completion[i][own];
        if (static_cast<int>(row.size()) != idx.co_count(i)) {
          throw InconsistentCompletion(g.name + ": completion row length");
        }
        S row_total = ScalarTraits<S>::zero();
        for (const auto& v : row) {
          if (v < 0) {
            throw InconsistentCompletion(g.name + ": negative completion mass");
          }
          row_total += v;
        }
        if (to_double<S>(abs_val<S>(row_total - ScalarTraits<S>::one())) >
            slack) {
          throw InconsistentCompletion(g.name + ": completion row not proper");
        }
        // where the own-action marginal is positive, the completion must be
        // the exact conditional
        S m = marginal(idx, i, own);
        if (m == 0) continue;
        for (int co = 0; co < idx.co_count(i); ++co) {
          S joint =
              p[idx.flat(idx.with_own(i, own, idx.co_unflat(i, co)))];
          if (to_double<S>(abs_val<S>(row[co] * m - joint)) > slack) {
            throw InconsistentCompletion(
                g.name + ": completion disagrees with a realized conditional");
          }
        }
      }
    }
  }
};

// shared randomness: a joint distribution over per-player messages
template <class S>
struct CorrelationDevice {
  std::vector<int> counts;  // message alphabet size per player
  std::vector<S> p;         // dense over flat joint messages

  JointIndexer indexer() const { return JointIndexer(counts); }

  S message_marginal(int player, int m) const {
    JointIndexer idx = indexer();
    S total = ScalarTraits<S>::zero();
    for (int co = 0; co < idx.co_count(player); ++co) {
      total += p[idx.flat(idx.with_own(player, m, idx.co_unflat(player, co)))];
    }
    return total;
  }

  // conditional over co-messages given one player's message (positive
  // marginal required)
  std::vector<S> co_messages_given(int player, int m) const {
    JointIndexer idx = indexer();
    S total = message_marginal(player, m);
    if (total == 0) {
      throw UndefinedConditional("correlation device: zero-mass message");
    }
    std::vector<S> cond(idx.co_count(player));
    for (int co = 0; co < idx.co_count(player); ++co) {
      cond[co] =
          p[idx.flat(idx.with_own(player, m, idx.co_unflat(player, co)))] /
          total;
    }
    return cond;
  }

  void validate() const {
    JointIndexer idx = indexer();
    if (static_cast<int>(p.size()) != idx.count()) {
      throw AlphabetMismatch("correlation device: table size mismatch");
    }
    S total = ScalarTraits<S>::zero();
    for (const auto& v : p) {
      if (v < 0) throw SupportViolation("correlation device: negative mass");
      total += v;
    }
    if (total != ScalarTraits<S>::one()) {
      throw SupportViolation("correlation device: masses must sum to 1");
    }
  }
};

// A correlated profile: device, per-message mixed actions, and per player a
// deviation kernel q giving the expected co-profile after an action the
// player's own policy never takes. q is message independent; the correlation
// the device induces enters through the policies.
template <class S>
struct CeeInstance {
  CorrelationDevice<S> device;
  // policy[player][message] is a distribution over that player's actions
  std::vector<std::vector<Dist<S>>> policy;
  // q[player][own action][flat co-profile]
  std::vector<std::vector<std::vector<S>>> q;
};

// embed a dependency distribution as a correlated profile: messages are
// recommended actions, policies obey them, and the deviation kernel is the
// dependency completion
template <class S>
CeeInstance<S> de_to_cee(const NormalFormGame<S>& g,
                         const DependencyDistribution<S>& dep) {
  dep.validate(g);
  JointIndexer idx = g.indexer();
  CeeInstance<S> cee;
  cee.device.counts.reserve(g.players());
  for (int i = 0; i < g.players(); ++i) {
    cee.device.counts.push_back(idx.size(i));
  }
  cee.device.p = dep.p;
  cee.policy.resize(g.players());
  for (int i = 0; i < g.players(); ++i) {
    cee.policy[i].reserve(idx.size(i));
    for (int m = 0; m < idx.size(i); ++m) {
      cee.policy[i].push_back(Dist<S>::point(idx.size(i), m));
    }
  }
  cee.q = dep.completion;
  return cee;
}

}  // namespace embayes

#endif  // EMBAYES_EQUILIBRIA_DEPENDENCY_HPP_

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

#ifndef EMBAYES_EQUILIBRIA_GAME_HPP_
#define EMBAYES_EQUILIBRIA_GAME_HPP_

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "embayes/core/alphabet.hpp"
#include "embayes/core/multi_agent.hpp"
#include "embayes/planning/task.hpp"

namespace embayes {

// row-major flattening of joint action profiles, plus the co-profile views
// one seat needs when its own coordinate is held out
class JointIndexer {
 public:
  JointIndexer() = default;
  explicit JointIndexer(std::vector<int> sizes) : sizes_(std::move(sizes)) {}

  int players() const { return static_cast<int>(sizes_.size()); }
  int size(int player) const { return sizes_[player]; }

  int count() const {
    int n = 1;
    for (int s : sizes_) n *= s;
    return n;
  }

  int flat(const std::vector<int>& joint) const {
    int f = 0;
    for (int j = 0; j < players(); ++j) f = f * sizes_[j] + joint[j];
    return f;
  }

  std::vector<int> unflat(int flat_index) const {
    std::vector<int> joint(players());
    for (int j = players() - 1; j >= 0; --j) {
      joint[j] = flat_index % sizes_[j];
      flat_index /= sizes_[j];
    }
    return joint;
  }

  int co_count(int player) const { return count() / sizes_[player]; }

  // flatten the co-profile of a joint (everyone except player), row-major in
  // the remaining coordinates
  int co_flat(int player, const std::vector<int>& joint) const {
    int f = 0;
    for (int j = 0; j < players(); ++j) {
      if (j == player) continue;
      f = f * sizes_[j] + joint[j];
    }
    return f;
  }

  std::vector<int> co_unflat(int player, int co_index) const {
    std::vector<int> co(players() - 1);
    for (int j = players() - 1, k = players() - 2; j >= 0; --j) {
      if (j == player) continue;
      co[k] = co_index % sizes_[j];
      co_index /= sizes_[j];
      --k;
    }
    return co;
  }

  // reassemble a joint from one seat's action and the co-profile
  std::vector<int> with_own(int player, int own,
                            const std::vector<int>& co) const {
    std::vector<int> joint(players());
    int k = 0;
    for (int j = 0; j < players(); ++j) {
      joint[j] = (j == player) ? own : co[k++];
    }
    return joint;
  }

 private:
  std::vector<int> sizes_;
};

// one-shot normal-form game; payoff[i] is dense over flat joint profiles
template <class S>
struct NormalFormGame {
  std::string name;
  std::vector<Alphabet> actions;
  std::vector<std::vector<S>> payoff;

  int players() const { return static_cast<int>(actions.size()); }

  JointIndexer indexer() const {
    std::vector<int> sizes;
    sizes.reserve(actions.size());
    for (const auto& a : actions) sizes.push_back(a.size());
    return JointIndexer(std::move(sizes));
  }

  void validate() const {
    if (payoff.size() != actions.size()) {
      throw AlphabetMismatch(name + ": one payoff table per player");
    }
    int n = indexer().count();
    for (const auto& table : payoff) {
      if (static_cast<int>(table.size()) != n) {
        throw AlphabetMismatch(name + ": payoff table size mismatch");
      }
    }
  }

  const S& payoff_at(int player, const std::vector<int>& joint) const {
    return payoff[player][indexer().flat(joint)];
  }
};

namespace equilibria_detail {

// rational payoff rendered safe for symbol names ('/' is reserved)
template <class S>
std::string payoff_label(const S& v) {
  std::string s = ScalarTraits<S>::str(v);
  std::replace(s.begin(), s.end(), '/', ':');
  std::replace(s.begin(), s.end(), '-', 'n');
  return s;
}

}  // namespace equilibria_detail

// One seat's view of a repeated normal-form game. Percepts are (co-profile,
// own payoff) pairs, so the reward is a function of the percept alone; the
// task carries the affine map back to raw payoff units.
template <class S>
struct PersonalGameView {
  int player = 0;
  Space space;
  DiscountedTask<S> task;
  std::vector<int> percept_of_joint;  // indexed by flat joint profile
};

template <class S>
PersonalGameView<S> personal_game_view(const NormalFormGame<S>& g, int player,
                                       const S& gamma) {
  g.validate();
  JointIndexer idx = g.indexer();
  S rmin = g.payoff[player][0];
  S rmax = rmin;
  for (const auto& v : g.payoff[player]) {
    rmin = std::min(rmin, v);
    rmax = std::max(rmax, v);
  }
  S scale = rmax - rmin;
  if (scale == 0) scale = ScalarTraits<S>::one();

  // canonical percept order: by (co-profile, payoff)
  std::map<std::pair<int, S>, int> key_to_percept;
  std::vector<std::pair<int, S>> keys;
  for (int f = 0; f < idx.count(); ++f) {
    std::vector<int> joint = idx.unflat(f);
    keys.emplace_back(idx.co_flat(player, joint), g.payoff[player][f]);
  }
  {
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const auto& k : sorted) {
      key_to_percept[k] = static_cast<int>(key_to_percept.size());
    }
  }

  std::vector<std::string> labels(key_to_percept.size());
  std::vector<S> reward(key_to_percept.size());
  for (const auto& [key, e] : key_to_percept) {
    std::vector<int> co = idx.co_unflat(player, key.first);
    std::string label;
    int k = 0;
    for (int j = 0; j < g.players(); ++j) {
      if (j == player) continue;
      if (!label.empty()) label += ".";
      label += g.actions[j].name(co[k++]);
    }
    labels[e] = label + "_r" + equilibria_detail::payoff_label<S>(key.second);
    reward[e] = (key.second - rmin) / scale;
  }

  PersonalGameView<S> view;
  view.player = player;
  view.space = Space{g.actions[player], Alphabet(std::move(labels))};
  view.task.gamma = gamma;
  view.task.reward = std::move(reward);
  view.task.payoff_scale = scale;
  view.task.payoff_shift = rmin;
  view.percept_of_joint.reserve(idx.count());
  for (int f = 0; f < idx.count(); ++f) {
    view.percept_of_joint.push_back(key_to_percept.at(keys[f]));
  }
  return view;
}

template <class S>
std::vector<PersonalGameView<S>> personal_game_views(const NormalFormGame<S>& g,
                                                     const S& gamma) {
  std::vector<PersonalGameView<S>> views;
  views.reserve(g.players());
  for (int i = 0; i < g.players(); ++i) {
    views.push_back(personal_game_view(g, i, gamma));
  }
  return views;
}

// repeated play of g as a deterministic joint environment: each seat observes
// its (co-profile, payoff) percept for the round
template <class S>
MultiAgentEnvPtr<S> game_multiagent_env(
    const NormalFormGame<S>& g, const std::vector<PersonalGameView<S>>& views,
    int rounds = kUnboundedDepth) {
  JointIndexer idx = g.indexer();
  std::vector<Space> seats;
  seats.reserve(views.size());
  for (const auto& v : views) seats.push_back(v.space);
  auto fn = [idx, views](const JointHistory&, const std::vector<int>& actions) {
    int f = idx.flat(actions);
    std::vector<int> es;
    es.reserve(views.size());
    for (const auto& v : views) es.push_back(v.percept_of_joint[f]);
    typename MultiAgentEnv<S>::JointDist out;
    out.emplace_back(std::move(es), ScalarTraits<S>::one());
    return out;
  };
  return std::make_shared<FnMultiAgentEnv<S>>(std::move(seats), std::move(fn),
                                              g.name + "_stage", rounds);
}

}  // namespace embayes

#endif  // EMBAYES_EQUILIBRIA_GAME_HPP_

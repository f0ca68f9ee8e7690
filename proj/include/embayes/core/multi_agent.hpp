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

#ifndef EMBAYES_CORE_MULTI_AGENT_HPP_
#define EMBAYES_CORE_MULTI_AGENT_HPP_

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "embayes/core/universe.hpp"

namespace embayes {

struct JointTurn {
  std::vector<int> actions;
  std::vector<int> percepts;
  auto operator<=>(const JointTurn&) const = default;
};

class JointHistory {
 public:
  JointHistory() = default;
  int length() const { return static_cast<int>(turns_.size()); }
  const JointTurn& turn(int t) const { return turns_[t]; }
  void push(JointTurn t) { turns_.push_back(std::move(t)); }
  void pop() { turns_.pop_back(); }
  auto operator<=>(const JointHistory&) const = default;

  // projection onto one seat
  History personal(int player) const {
    History h;
    for (const auto& t : turns_) h.push(t.actions[player], t.percepts[player]);
    return h;
  }

 private:
  std::vector<JointTurn> turns_;
};

// k-seat environment sigma(e^1..e^k | joint history, a^1..a^k). joint percept
// distributions are sparse lists of (percept tuple, mass).
template <class S>
class MultiAgentEnv {
 public:
  using JointDist = std::vector<std::pair<std::vector<int>, S>>;

  virtual ~MultiAgentEnv() = default;
  virtual int players() const = 0;
  virtual const Space& seat_space(int player) const = 0;
  virtual int depth() const { return kUnboundedDepth; }
  virtual std::string name() const { return "multi_agent_env"; }
  virtual JointDist per(const JointHistory& h,
                        const std::vector<int>& actions) const = 0;
};

template <class S>
using MultiAgentEnvPtr = std::shared_ptr<const MultiAgentEnv<S>>;

template <class S>
class FnMultiAgentEnv : public MultiAgentEnv<S> {
 public:
  using Fn = std::function<typename MultiAgentEnv<S>::JointDist(
      const JointHistory&, const std::vector<int>&)>;

  FnMultiAgentEnv(std::vector<Space> seats, Fn fn,
                  std::string name = "fn_multi_agent_env",
                  int depth = kUnboundedDepth)
      : seats_(std::move(seats)),
        fn_(std::move(fn)),
        name_(std::move(name)),
        depth_(depth) {}

  int players() const override { return static_cast<int>(seats_.size()); }
  const Space& seat_space(int player) const override { return seats_[player]; }
  int depth() const override { return depth_; }
  std::string name() const override { return name_; }

  typename MultiAgentEnv<S>::JointDist per(
      const JointHistory& h, const std::vector<int>& actions) const override {
    return fn_(h, actions);
  }

 private:
  std::vector<Space> seats_;
  Fn fn_;
  std::string name_;
  int depth_;
};

// Personal environment of one seat: co-player policies are marginalized out
// by exact forward filtering over joint histories consistent with the seat's
// personal history. The conditional is the ratio of the filtered mass that
// also produces the queried percept to the mass summed over all percepts.
template <class S>
class PersonalEnvironment : public Environment<S> {
 public:
  PersonalEnvironment(MultiAgentEnvPtr<S> sigma,
                      std::vector<PolicyPtr<S>> co_policies, int player)
      : sigma_(std::move(sigma)),
        co_policies_(std::move(co_policies)),
        player_(player) {
    if (static_cast<int>(co_policies_.size()) != sigma_->players()) {
      throw AlphabetMismatch("personal_environment: one policy slot per seat");
    }
    if (co_policies_[player_] != nullptr) {
      throw AlphabetMismatch(
          "personal_environment: the focal seat must have a null policy");
    }
  }

  const Space& space() const override { return sigma_->seat_space(player_); }
  int depth() const override { return sigma_->depth(); }
  std::string name() const override {
    return sigma_->name() + "@seat" + std::to_string(player_);
  }

  Dist<S> per(const History& h, int a) const override {
    this->check_depth(h);
    std::map<JointHistory, S> states;
    states[JointHistory()] = ScalarTraits<S>::one();
    for (int t = 0; t < h.length(); ++t) {
      states = step(states, h.turn(t).action, h.turn(t).percept);
      if (states.empty()) {
        throw UndefinedConditional(name() + ": personal history unreachable");
      }
    }
    Dist<S> out(space().percepts.size());
    S denom = ScalarTraits<S>::zero();
    for (const auto& [jh, w] : states) {
      expand_actions(jh, a, [&](const std::vector<int>& acts, const S& wa) {
        for (const auto& [es, pe] : sigma_->per(jh, acts)) {
          out[es[player_]] += wa * pe;
          denom += wa * pe;
        }
      });
    }
    if (denom == 0) {
      throw UndefinedConditional(name() + ": zero mass over next percepts");
    }
    for (int e = 0; e < out.size(); ++e) out[e] = out[e] / denom;
    return out;
  }

 private:
  // all co-player action combinations with their policy weights
  template <class Yield>
  void expand_actions(const JointHistory& jh, int my_action,
                      Yield&& yield) const {
    int k = sigma_->players();
    std::vector<Dist<S>> acts;
    acts.reserve(k);
    for (int j = 0; j < k; ++j) {
      if (j == player_) {
        acts.push_back(Dist<S>::point(space().actions.size(), my_action));
      } else {
        acts.push_back(co_policies_[j]->act(jh.personal(j)));
      }
    }
    std::vector<int> chosen(k, 0);
    std::function<void(int, S)> rec = [&](int j, S w) {
      if (w == 0) return;
      if (j == k) {
        yield(chosen, w);
        return;
      }
      for (int a = 0; a < acts[j].size(); ++a) {
        chosen[j] = a;
        rec(j + 1, w * acts[j][a]);
      }
    };
    rec(0, ScalarTraits<S>::one());
  }

  std::map<JointHistory, S> step(const std::map<JointHistory, S>& states,
                                 int my_action, int my_percept) const {
    std::map<JointHistory, S> next;
    for (const auto& [jh, w] : states) {
      expand_actions(jh, my_action, [&](const std::vector<int>& acts,
                                        const S& wa) {
        for (const auto& [es, pe] : sigma_->per(jh, acts)) {
          if (es[player_] != my_percept) continue;
          S wn = wa * pe;
          if (wn == 0) continue;
          JointHistory ext = jh;
          ext.push(JointTurn{acts, es});
          next[ext] += wn;
        }
      });
    }
    return next;
  }

  MultiAgentEnvPtr<S> sigma_;
  std::vector<PolicyPtr<S>> co_policies_;
  int player_;
};

template <class S>
EnvironmentPtr<S> personal_environment(MultiAgentEnvPtr<S> sigma,
                                       std::vector<PolicyPtr<S>> co_policies,
                                       int player) {
  return std::make_shared<PersonalEnvironment<S>>(
      std::move(sigma), std::move(co_policies), player);
}

}  // namespace embayes

#endif  // EMBAYES_CORE_MULTI_AGENT_HPP_

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

#ifndef EMBAYES_CORE_TV_HPP_
#define EMBAYES_CORE_TV_HPP_

#include "embayes/core/universe.hpp"

namespace embayes {

// D_k: total variation between the two conditional distributions over the
// next k turns given h. Per-turn mass lost by a semimeasure is routed to an
// internal absorbing deficit bucket (the canonical completion), which keeps
// D_k nondecreasing in k. No bucket symbol appears in any alphabet.
template <class S>
S total_variation_k(const Universe<S>& u1, const Universe<S>& u2,
                    const History& h, int k) {
  if (!(u1.space() == u2.space())) {
    throw AlphabetMismatch("total_variation_k: space mismatch");
  }
  u1.check_depth(h, k);
  u2.check_depth(h, k);
  S base1 = u1.prefix(h);
  S base2 = u2.prefix(h);
  if (base1 == 0 || base2 == 0) {
    throw UndefinedConditional("total_variation_k: zero mass at base");
  }
  const Space& sp = u1.space();
  S acc = ScalarTraits<S>::zero();

  struct Walker {
    const Universe<S>& u1;
    const Universe<S>& u2;
    const Space& sp;
    S base1, base2;
    S* acc;
    int k;

    void walk(History& h, int level, S m1, S m2) {
      if (level == k) {
        *acc += abs_val<S>(m1 / base1 - m2 / base2);
        return;
      }
      S used1 = ScalarTraits<S>::zero();
      S used2 = ScalarTraits<S>::zero();
      for (int a = 0; a < sp.actions.size(); ++a) {
        for (int e = 0; e < sp.percepts.size(); ++e) {
          h.push(a, e);
          S c1 = m1 == 0 ? ScalarTraits<S>::zero() : u1.prefix(h);
          S c2 = m2 == 0 ? ScalarTraits<S>::zero() : u2.prefix(h);
          used1 += c1;
          used2 += c2;
          if (c1 != 0 || c2 != 0) walk(h, level + 1, c1, c2);
          h.pop();
        }
      }
      // per-turn deficit, absorbing: contributes once, at the level it
      // appears, exactly like its length-k refinement would
      *acc += abs_val<S>((m1 - used1) / base1 - (m2 - used2) / base2);
    }
  };

  History walk_h = h;
  Walker{u1, u2, sp, base1, base2, &acc, k}.walk(walk_h, 0, base1, base2);
  return acc / S(2);
}

}  // namespace embayes

#endif  // EMBAYES_CORE_TV_HPP_

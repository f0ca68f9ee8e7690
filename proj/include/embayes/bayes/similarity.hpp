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

#ifndef EMBAYES_BAYES_SIMILARITY_HPP_
#define EMBAYES_BAYES_SIMILARITY_HPP_

#include <cmath>
#include <vector>

#include "embayes/bayes/decoupled.hpp"
#include "embayes/bayes/loss.hpp"

namespace embayes {

// grain of uncertainty: rho(h a) > 0 for every history to the given depth and
// every action. equivalently the whole tree has positive mass.
template <class S>
bool grain_of_uncertainty(const Universe<S>& rho, int depth) {
  struct Walker {
    const Universe<S>& rho;
    int depth;
    bool ok = true;
    void walk(History& h) {
      if (!ok || h.length() >= depth) return;
      const Space& sp = rho.space();
      for (int a = 0; a < sp.actions.size() && ok; ++a) {
        if (rho.prefix_act(h, a) == 0) {
          ok = false;
          return;
        }
        for (int e = 0; e < sp.percepts.size() && ok; ++e) {
          h.push(a, e);
          if (rho.prefix(h) == 0) {
            // a dead percept node makes deeper action prefixes zero
            if (h.length() < depth) ok = false;
          } else {
            walk(h);
          }
          h.pop();
        }
      }
    }
  };
  History h;
  Walker w{rho, depth};
  w.walk(h);
  return w.ok;
}

// Structural similarity of one member against the prior's marginals:
//   S(lambda, w) = log( w(lambda) / (w(nu_lambda) w(pi_lambda)) ).
// Exact form as a formal log value, plus a numeric view. The prior must be
// fully supported in the grain-of-uncertainty sense to the checked depth.
struct SimilarityReport {
  LogValue exact;      // natural-log units
  double nats = 0.0;
  double bits = 0.0;
};

template <class S>
void require_fully_supported(const MixtureUniverse<S>& rho, int depth) {
  if (!grain_of_uncertainty(rho, depth)) {
    throw NotFullySupported(rho.name() +
                            ": similarity needs a fully supported mixture");
  }
}

template <class S>
SimilarityReport structural_similarity(const MixtureUniverse<S>& rho,
                                       const DecoupledFactorization<S>& f,
                                       int member, int support_depth) {
  static_assert(ScalarTraits<S>::exact, "similarity uses the exact backend");
  require_fully_supported(rho, support_depth);
  const Rational w = rho.prior().w[member];
  if (w == 0) throw SupportViolation("member has zero prior weight");
  const auto [pi_ix, env_ix] = f.factor_of[member];
  SimilarityReport rep;
  rep.exact.add_term(Rational(1), w / (f.w_pol[pi_ix] * f.w_env[env_ix]));
  rep.nats = rep.exact.to_double();
  rep.bits = rep.nats / std::log(2.0);
  return rep;
}

// Average structural similarity = mutual information I_w(pi; nu) >= 0.
// The exact lower-bound certificate comes from log x >= 1 - 1/x per term.
struct AvgSimilarityReport {
  LogTermSum exact;
  double nats = 0.0;
  double bits = 0.0;
  bool nonneg_certified = false;
};

template <class S>
AvgSimilarityReport avg_structural_similarity(
    const MixtureUniverse<S>& rho, const DecoupledFactorization<S>& f,
    int support_depth) {
  static_assert(ScalarTraits<S>::exact, "similarity uses the exact backend");
  require_fully_supported(rho, support_depth);
  AvgSimilarityReport rep;
  for (size_t i = 0; i < rho.hypothesis_class().members.size(); ++i) {
    const Rational w = rho.prior().w[i];
    if (w == 0) continue;
    const auto [pi_ix, env_ix] = f.factor_of[i];
    rep.exact.add(w, w / (f.w_pol[pi_ix] * f.w_env[env_ix]));
  }
  rep.nats = rep.exact.to_double();
  rep.bits = rep.nats / std::log(2.0);
  rep.nonneg_certified = rep.exact.exact_lower_bound() >= 0;
  return rep;
}

}  // namespace embayes

#endif  // EMBAYES_BAYES_SIMILARITY_HPP_

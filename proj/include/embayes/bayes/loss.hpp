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

#ifndef EMBAYES_BAYES_LOSS_HPP_
#define EMBAYES_BAYES_LOSS_HPP_

#include <utility>
#include <vector>

#include "embayes/bayes/decoupled.hpp"
#include "embayes/bayes/mixture.hpp"
#include "embayes/core/logvalue.hpp"

namespace embayes {

// Cumulative prediction loss of predictor rho against truth lambda over the
// first n turns:
//   L_n = sum_t E_lambda[ KL(lambda(.|h) || rho(.|h)) + KL percept term ].
// Exact backend only; every term is kept as a formal c*log(r) pair so the
// standard identities can be checked exactly. Requires rho > 0 wherever
// lambda > 0 (dominance), else the loss is infinite and we throw.
inline void add_kl_terms(const Rational& weight, const Dist<Rational>& p,
                         const Dist<Rational>& q, LogTermSum* out) {
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    if (q[i] == 0) throw SupportViolation("prediction loss: no dominance");
    out->add(weight * p[i], p[i] / q[i]);
  }
}

template <class U1, class U2>
LogTermSum prediction_loss(const U1& rho, const U2& lambda, int n) {
  LogTermSum loss;
  struct Walker {
    const U1& rho;
    const U2& lambda;
    int n;
    LogTermSum* loss;
    void walk(History& h, const Rational& mass) {
      if (h.length() == n) return;
      Dist<Rational> pa = lambda.cond_action(h);
      Dist<Rational> qa = rho.cond_action(h);
      add_kl_terms(mass, pa, qa, loss);
      for (int a = 0; a < pa.size(); ++a) {
        if (pa[a] == 0) continue;
        Dist<Rational> pe = lambda.cond_percept(h, a);
        Dist<Rational> qe = rho.cond_percept(h, a);
        add_kl_terms(mass * pa[a], pe, qe, loss);
        for (int e = 0; e < pe.size(); ++e) {
          if (pe[e] == 0) continue;
          h.push(a, e);
          walk(h, mass * pa[a] * pe[e]);
          h.pop();
        }
      }
    }
  };
  History h;
  Walker{rho, lambda, n, &loss}.walk(h, Rational(1));
  return loss;
}

// KL between the two length-n history distributions:
//   sum_{l(h)=n} p(h) log(p(h) / q(h))
template <class U1, class U2>
LogTermSum kl_histories(const U1& p, const U2& q, int n) {
  LogTermSum out;
  struct Walker {
    const U1& p;
    const U2& q;
    int n;
    LogTermSum* out;
    void walk(History& h) {
      Rational mp = p.prefix(h);
      if (mp == 0) return;
      if (h.length() == n) {
        Rational mq = q.prefix(h);
        if (mq == 0) throw SupportViolation("kl_histories: no dominance");
        out->add(mp, mp / mq);
        return;
      }
      const Space& sp = p.space();
      for (int a = 0; a < sp.actions.size(); ++a) {
        for (int e = 0; e < sp.percepts.size(); ++e) {
          h.push(a, e);
          walk(h);
          h.pop();
        }
      }
    }
  };
  History h;
  Walker{p, q, n, &out}.walk(h);
  return out;
}

// Exact certificate for L_n(rho, lambda) <= -log w(lambda): the difference
//   -log w - L_n = sum_h lambda(h) log( rho(h) / (w lambda(h)) )
//                  + (1 - sum_h lambda(h)) log(1/w)
// is a sum of terms c*log(r) with c >= 0 and r >= 1 by dominance
// (rho >= w lambda pointwise), so nonnegativity is a rational comparison per
// term, no numerics involved.
struct SolomonoffCertificate {
  LogTermSum gap;   // -log w(lambda) - L_n, term by term
  bool valid = false;
};

template <class S>
SolomonoffCertificate solomonoff_bound_certificate(
    const MixtureUniverse<S>& rho, int member, int n) {
  static_assert(ScalarTraits<S>::exact, "certificate needs the exact backend");
  const Rational w = rho.prior().w[member];
  if (w == 0) throw SupportViolation("member has zero prior weight");
  const auto& lambda = *rho.hypothesis_class().members[member];
  SolomonoffCertificate cert;
  Rational covered(0);

  struct Walker {
    const MixtureUniverse<S>& rho;
    const Universe<S>& lambda;
    const Rational& w;
    int n;
    LogTermSum* gap;
    Rational* covered;
    void walk(History& h) {
      Rational ml = lambda.prefix(h);
      if (ml == 0) return;
      if (h.length() == n) {
        Rational mr = rho.prefix(h);
        gap->add(ml, mr / (w * ml));
        *covered += ml;
        return;
      }
      const Space& sp = rho.space();
      for (int a = 0; a < sp.actions.size(); ++a) {
        for (int e = 0; e < sp.percepts.size(); ++e) {
          h.push(a, e);
          walk(h);
          h.pop();
        }
      }
    }
  };
  History h;
  Walker{rho, lambda, w, n, &cert.gap, &covered}.walk(h);
  // semimeasure deficit of lambda at length n carries the plain -log w bound
  cert.gap.add(Rational(1) - covered, Rational(1) / w);
  cert.valid = cert.gap.nonnegative_termwise();
  return cert;
}

// Average regret of predicting with the decoupled product prior instead of
// the coupled one:
//   sum_lambda w(lambda) (L_n(rho_d, lambda) - L_n(rho, lambda))
//     = sum_{l(h)=n} rho(h) log( rho(h) / rho_d(h) )  (>= 0).
// Both sides are returned so the identity can be asserted exactly; the
// nonnegativity certificate uses log x >= 1 - 1/x per term.
struct LossGap {
  LogTermSum weighted_loss_difference;  // lhs
  LogTermSum mixture_log_ratio;         // rhs, E_rho[log(rho/rho_d)]
};

template <class S>
LossGap avg_loss_gap(const MixtureUniverse<S>& rho,
                     const MixtureUniverse<S>& rho_d, int n) {
  static_assert(ScalarTraits<S>::exact, "avg_loss_gap needs exact backend");
  LossGap out;
  const auto& cls = rho.hypothesis_class();
  for (size_t i = 0; i < cls.members.size(); ++i) {
    Rational w = rho.prior().w[i];
    if (w == 0) continue;
    LogTermSum ld = prediction_loss(rho_d, *cls.members[i], n);
    LogTermSum lc = prediction_loss(rho, *cls.members[i], n);
    for (auto& [c, r] : ld.terms) {
      out.weighted_loss_difference.add(w * c, r);
    }
    for (auto& [c, r] : lc.terms) {
      out.weighted_loss_difference.add(-w * c, r);
    }
  }
  out.mixture_log_ratio = kl_histories(rho, rho_d, n);
  return out;
}

}  // namespace embayes

#endif  // EMBAYES_BAYES_LOSS_HPP_

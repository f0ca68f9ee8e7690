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

#ifndef EMBAYES_CORE_DIST_HPP_
#define EMBAYES_CORE_DIST_HPP_

#include <vector>

#include "embayes/core/errors.hpp"
#include "embayes/core/scalar.hpp"

namespace embayes {

template <class S>
S abs_val(const S& x) {
  return x < 0 ? S(-x) : x;
}

// sub-distribution over a finite alphabet: nonnegative weights, total <= 1.
// deficits are legal (semimeasure convention), negatives are not.
template <class S>
class Dist {
 public:
  Dist() = default;
  explicit Dist(int n) : w_(n, ScalarTraits<S>::zero()) {}
  explicit Dist(std::vector<S> w) : w_(std::move(w)) {}

  static Dist uniform(int n) {
    Dist d(n);
    for (int i = 0; i < n; ++i) d.w_[i] = ScalarTraits<S>::one() / S(n);
    return d;
  }
  static Dist point(int n, int i) {
    Dist d(n);
    d.w_[i] = ScalarTraits<S>::one();
    return d;
  }

  int size() const { return static_cast<int>(w_.size()); }
  const S& operator[](int i) const { return w_[i]; }
  S& operator[](int i) { return w_[i]; }

  S total() const {
    S t = ScalarTraits<S>::zero();
    for (const auto& x : w_) t += x;
    return t;
  }

  // throws unless weights are nonnegative and total at most 1 (+ slack for
  // the float backend)
  void validate(double slack = 1e-9) const {
    for (const auto& x : w_) {
      if (to_double<S>(x) < -slack) throw SupportViolation("negative mass");
    }
    if (to_double<S>(total()) > 1.0 + slack) {
      throw SupportViolation("mass exceeds one");
    }
  }

  S deficit() const { return ScalarTraits<S>::one() - total(); }

  S tv(const Dist& o) const {
    if (o.size() != size()) throw AlphabetMismatch("tv size mismatch");
    S acc = ScalarTraits<S>::zero();
    for (int i = 0; i < size(); ++i) acc += abs_val<S>(w_[i] - o.w_[i]);
    // deficits count as mass on an implicit extra symbol
    acc += abs_val<S>(deficit() - o.deficit());
    return acc / S(2);
  }

  const std::vector<S>& weights() const { return w_; }
  bool operator==(const Dist& o) const { return w_ == o.w_; }

 private:
  std::vector<S> w_;
};

}  // namespace embayes

#endif  // EMBAYES_CORE_DIST_HPP_

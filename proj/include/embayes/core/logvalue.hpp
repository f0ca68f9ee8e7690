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

#ifndef EMBAYES_CORE_LOGVALUE_HPP_
#define EMBAYES_CORE_LOGVALUE_HPP_

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "embayes/core/scalar.hpp"

namespace embayes {

// Formal linear combination of logarithms of positive rationals, kept exact.
//
// Every term c*log(a/b) is expanded over the prime factorizations of a and b,
// so the value is a sparse map base -> rational coefficient with prime bases.
// Logs of distinct primes are linearly independent over Q, which makes map
// equality the same thing as equality of the represented real numbers.
//
// A base that survives trial division and is too large to certify prime is
// kept as an opaque composite base. That can only make two equal reals look
// unequal (loud test failure), never the other way around.
class LogValue {
 public:
  LogValue() = default;

  static std::vector<std::pair<BigInt, int>> factorize(BigInt n) {
    std::vector<std::pair<BigInt, int>> out;
    if (n <= 1) return out;
    auto take = [&](const BigInt& p) {
      int k = 0;
      while (n % p == 0) {
        n /= p;
        ++k;
      }
      if (k > 0) out.emplace_back(p, k);
    };
    take(BigInt(2));
    take(BigInt(3));
    for (BigInt p = 5; p * p <= n && p < 70000; p += 6) {
      take(p);
      take(p + 2);
    }
    if (n > 1) out.emplace_back(n, 1);  // prime if < 70000^2, else opaque
    return out;
  }

  // value += c * log(r), r > 0
  void add_term(const Rational& c, const Rational& r) {
    if (c == 0 || r == 1) return;
    if (r <= 0) throw SupportViolation("log of nonpositive rational");
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    for (const auto& [p, k] : factorize(num)) bump(p, c * k);
    for (const auto& [p, k] : factorize(den)) bump(p, -c * k);
  }

  LogValue& operator+=(const LogValue& o) {
    for (const auto& [p, c] : o.coeff_) bump(p, c);
    return *this;
  }
  LogValue& operator-=(const LogValue& o) {
    for (const auto& [p, c] : o.coeff_) bump(p, -c);
    return *this;
  }
  friend LogValue operator-(LogValue a, const LogValue& b) { return a -= b; }
  friend LogValue operator+(LogValue a, const LogValue& b) { return a += b; }

  void scale(const Rational& c) {
    if (c == 0) {
      coeff_.clear();
      return;
    }
    for (auto& [p, w] : coeff_) w *= c;
  }

  bool is_zero() const { return coeff_.empty(); }
  bool operator==(const LogValue& o) const { return coeff_ == o.coeff_; }

  // numeric view, natural log
  double to_double() const {
    double acc = 0.0;
    for (const auto& [p, c] : coeff_) {
      acc += ScalarTraits<Rational>::to_double(c) *
             std::log(p.template convert_to<double>());
    }
    return acc;
  }

  const std::map<BigInt, Rational>& coefficients() const { return coeff_; }

 private:
  void bump(const BigInt& p, const Rational& c) {
    auto it = coeff_.find(p);
    if (it == coeff_.end()) {
      if (c != 0) coeff_.emplace(p, c);
      return;
    }
    it->second += c;
    if (it->second == 0) coeff_.erase(it);
  }

  std::map<BigInt, Rational> coeff_;
};

// Raw term list c_i * log(r_i) kept for exact one-sided certificates.
struct LogTermSum {
  std::vector<std::pair<Rational, Rational>> terms;  // (coefficient, base)

  void add(const Rational& c, const Rational& r) {
    if (c == 0 || r == 1) return;
    if (r <= 0) throw SupportViolation("log of nonpositive rational");
    terms.emplace_back(c, r);
  }

  LogValue canonical() const {
    LogValue v;
    for (const auto& [c, r] : terms) v.add_term(c, r);
    return v;
  }

  double to_double() const {
    double acc = 0.0;
    for (const auto& [c, r] : terms) {
      acc += ScalarTraits<Rational>::to_double(c) *
             std::log(ScalarTraits<Rational>::to_double(r));
    }
    return acc;
  }

  // every term individually nonnegative: c >= 0 and r >= 1, or c <= 0, r <= 1
  bool nonnegative_termwise() const {
    for (const auto& [c, r] : terms) {
      bool ok = (c >= 0 && r >= 1) || (c <= 0 && r <= 1);
      if (!ok) return false;
    }
    return true;
  }

  // exact rational lower bound from log x >= 1 - 1/x (c >= 0 branch) and
  // log x <= x - 1 (c < 0 branch). If this is >= 0 the sum is >= 0, exactly.
  Rational exact_lower_bound() const {
    Rational lb(0);
    for (const auto& [c, r] : terms) {
      if (c >= 0) {
        lb += c * (Rational(1) - Rational(1) / r);
      } else {
        lb += c * (r - Rational(1));
      }
    }
    return lb;
  }
};

}  // namespace embayes

#endif  // EMBAYES_CORE_LOGVALUE_HPP_

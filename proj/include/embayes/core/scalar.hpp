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

#ifndef EMBAYES_CORE_SCALAR_HPP_
#define EMBAYES_CORE_SCALAR_HPP_

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <string>

#include "embayes/core/errors.hpp"

namespace embayes {

// exact backend. header-only boost rational over cpp_int.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// the two scalar backends share this little trait surface so that all of the
// probability kernels can be written once.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational ratio(long long num, long long den) {
    return Rational(BigInt(num), BigInt(den));
  }
  static double to_double(const Rational& x) {
    return x.template convert_to<double>();
  }
  static std::string str(const Rational& x) {
    return x.str();
  }
  static Rational parse(const std::string& s) {
    // accepts "p/q" and plain integers
    try {
      return Rational(s);
    } catch (const std::exception&) {
      throw SupportViolation("cannot parse rational: " + s);
    }
  }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double ratio(long long num, long long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double x) { return x; }
  static std::string str(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  }
  static double parse(const std::string& s) {
    // accept the exact backend's p/q form too so documents round trip
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      double num = std::stod(s.substr(0, slash));
      double den = std::stod(s.substr(slash + 1));
      return num / den;
    }
    return std::stod(s);
  }
};

template <class S>
double to_double(const S& x) {
  return ScalarTraits<S>::to_double(x);
}

}  // namespace embayes

#endif  // EMBAYES_CORE_SCALAR_HPP_

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

#ifndef EMBAYES_CORE_ERRORS_HPP_
#define EMBAYES_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace embayes {

// base for everything we throw on purpose
struct EmbayesError : std::runtime_error {
  explicit EmbayesError(const std::string& msg) : std::runtime_error(msg) {}
};

// conditional requested at a zero-mass node and no completion is attached
struct UndefinedConditional : EmbayesError {
  explicit UndefinedConditional(const std::string& msg) : EmbayesError(msg) {}
};

// realized symbol has zero predictive mass under the mixture
struct ZeroPredictiveMass : EmbayesError {
  explicit ZeroPredictiveMass(const std::string& msg) : EmbayesError(msg) {}
};

// distribution support leaves the declared alphabet, or mass exceeds 1
struct SupportViolation : EmbayesError {
  explicit SupportViolation(const std::string& msg) : EmbayesError(msg) {}
};

// similarity diagnostics require a fully supported prior/class
struct NotFullySupported : EmbayesError {
  explicit NotFullySupported(const std::string& msg) : EmbayesError(msg) {}
};

// query beyond an evaluator's declared depth
struct DepthExceeded : EmbayesError {
  explicit DepthExceeded(const std::string& msg) : EmbayesError(msg) {}
};

struct AlphabetMismatch : EmbayesError {
  explicit AlphabetMismatch(const std::string& msg) : EmbayesError(msg) {}
};

// completion disagrees with exact conditionals on positive-mass nodes
struct InconsistentCompletion : EmbayesError {
  explicit InconsistentCompletion(const std::string& msg) : EmbayesError(msg) {}
};

}  // namespace embayes

#endif  // EMBAYES_CORE_ERRORS_HPP_

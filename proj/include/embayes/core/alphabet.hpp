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

#ifndef EMBAYES_CORE_ALPHABET_HPP_
#define EMBAYES_CORE_ALPHABET_HPP_

#include <string>
#include <vector>

#include "embayes/core/errors.hpp"

namespace embayes {

// finite named symbol set; indices are the canonical identity, names are for
// tokens and documents. names must not contain '/' or whitespace.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols)
      : symbols_(std::move(symbols)) {
    for (const auto& s : symbols_) {
      if (s.empty() || s.find('/') != std::string::npos ||
          s.find(' ') != std::string::npos) {
        throw AlphabetMismatch("bad symbol name: '" + s + "'");
      }
    }
  }

  int size() const { return static_cast<int>(symbols_.size()); }

  const std::string& name(int i) const {
    if (i < 0 || i >= size()) throw AlphabetMismatch("symbol index out of range");
    return symbols_[i];
  }

  int index(const std::string& name) const {
    for (int i = 0; i < size(); ++i) {
      if (symbols_[i] == name) return i;
    }
    throw AlphabetMismatch("unknown symbol: '" + name + "'");
  }

  bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

  const std::vector<std::string>& symbols() const { return symbols_; }

 private:
  std::vector<std::string> symbols_;
};

// an interaction space is an action alphabet plus a percept alphabet
struct Space {
  Alphabet actions;
  Alphabet percepts;

  bool operator==(const Space& o) const {
    return actions == o.actions && percepts == o.percepts;
  }
};

}  // namespace embayes

#endif  // EMBAYES_CORE_ALPHABET_HPP_

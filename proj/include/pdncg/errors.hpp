// Copyright (c) 2026, The pdncg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace pdncg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent vector or operator sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A scalar parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Wrong operator/dictionary kind for the requested operation.
class KindError : public Error {
 public:
  using Error::Error;
};

// Brute-force or dense diagnostics refused because the problem is too large.
class TooLargeError : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, std::size_t block)
      : Error(what), block_(block) {}
  std::size_t block() const { return block_; }

 private:
  std::size_t block_;
};

// Nonpositive curvature met inside conjugate gradients.
class DefinitenessError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

inline void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected length " +
                         std::to_string(want) + ", got " + std::to_string(got));
  }
}

}  // namespace pdncg

// Copyright 2026 The minimax-agg Authors.
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

#ifndef MINIMAX_AGG_ERRORS_H_
#define MINIMAX_AGG_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace minimax_agg {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A dual weight violates the sign constraint of its problem variant.
class SignError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. Row and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0,
             std::size_t column = 0);
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

// A parsed value is outside its permitted range.
class RangeError : public Error {
 public:
  using Error::Error;
};

class UnknownLossError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

// The adversary's constraint set appears to be empty.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or an unrecoverable numerical breakdown.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace minimax_agg

#endif  // MINIMAX_AGG_ERRORS_H_

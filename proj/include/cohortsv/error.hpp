// include/cohortsv/error.hpp

// Copyright 2026  The cohortsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef COHORTSV_ERROR_HPP
#define COHORTSV_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cohortsv {

/// Precondition violated by caller-supplied data or arguments.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A file or stream did not match its declared format.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  /// 1-based line for text formats, byte offset for binary ones.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Iterative training produced a non-finite objective.
class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cohortsv

#endif  // COHORTSV_ERROR_HPP

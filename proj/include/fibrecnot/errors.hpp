// Copyright 2026 The fibrecnot Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fibrecnot {

/// Unknown mode label, duplicate label, or mismatched layouts.
class LayoutError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric argument outside its physical domain (reflectivity, overlap, visibility, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Post-selection success probability too small to define a conditional distribution.
class DegeneratePostSelection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Carries a 1-based line and column (0 when not applicable).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(format(line, column, what)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& what) {
    if (line == 0) return what;
    std::string prefix = "line " + std::to_string(line);
    if (column != 0) prefix += ", column " + std::to_string(column);
    return prefix + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

/// Invalid configuration or data that is well-formed but semantically wrong.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fibrecnot

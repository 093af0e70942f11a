/* Copyright 2026 The AdaAct Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace adaact {

// Shape or extent disagreement between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inconsistent model or run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Object used in a state that does not permit the call.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed or truncated file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Line-oriented parse failure; line numbers are 1-based.
class ParseError : public FormatError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : FormatError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a value constraint.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// No feasible alignment exists (e.g. more segments than frames).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace adaact

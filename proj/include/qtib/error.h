/*
 * Copyright 2026 The qtib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QTIB_ERROR_H_
#define QTIB_ERROR_H_

#include <stdexcept>
#include <string>

namespace qtib {

// Malformed input files (PGM, CSV, JSON). Messages name the byte offset or
// the row/column of the offending token.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs that parse but describe an unusable configuration, e.g. a
// covariance that is not positive definite or an all-zero prior.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated preconditions of an operation (expanding a non-leaf, asking for
// the children of a finest-level node, enumeration beyond depth 3, ...).
class DomainError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qtib

#endif  // QTIB_ERROR_H_

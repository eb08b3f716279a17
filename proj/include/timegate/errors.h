/* Copyright 2026 The TimeGate Authors. All Rights Reserved.

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

#ifndef TIMEGATE_ERRORS_H_
#define TIMEGATE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace timegate {

// Shape or extent mismatch between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Violated precondition on call order or object state.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed, truncated or version-mismatched file.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionError : public LoadError {
 public:
  using LoadError::LoadError;
};

// Synthetic dataset specification that cannot be realized.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced a non-finite loss.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace timegate

#endif  // TIMEGATE_ERRORS_H_

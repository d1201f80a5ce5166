// Copyright 2026 The cvortho Authors
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

namespace cvortho {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Probability weight leaked past the top Fock level. Carries a dimension
/// that would have satisfied the tail tolerance.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int required_dim)
      : Error(what + " (try dim >= " + std::to_string(required_dim) + ")"),
        required_dim_(required_dim) {}

  int required_dim() const noexcept { return required_dim_; }

 private:
  int required_dim_;
};

class HeraldImpossibleError : public Error {
 public:
  using Error::Error;
};

/// The orthogonalizer annihilated its input: the input is an eigenstate of
/// the chosen operator.
class EigenstateError : public Error {
 public:
  using Error::Error;
};

class DegenerateDenominatorError : public Error {
 public:
  using Error::Error;
};

class SingularConfigurationError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or numerically unusable input data (samples, files).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvortho

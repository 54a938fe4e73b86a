// Copyright 2026 The cvrealign Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace cvrealign {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates an operation's precondition (CLI exit code 3).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The kernel has c1 > 0. The realignment criteria here are only derived for
/// c1 <= 0 and are not silently extended.
class UnsupportedSignError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Numerical failure: singular matrix, non-convergence (CLI exit code 2).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericalError {
 public:
  explicit SingularMatrixError(std::string matrix_name)
      : NumericalError("matrix '" + matrix_name + "' is singular"),
        matrix_name_(std::move(matrix_name)) {}

  const std::string& matrix_name() const noexcept { return matrix_name_; }

 private:
  std::string matrix_name_;
};

}  // namespace cvrealign

// Copyright 2026 The orlab Authors
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

namespace orlab {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: negative arguments, bad knots, unknown families, ...
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Floating-point range exhausted (bracket blow-up, overflow).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Input that is well formed but degenerate for the requested operation,
/// e.g. an Orlicz function that vanishes on the whole probe grid.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace orlab

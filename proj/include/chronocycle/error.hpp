// Copyright 2026 The chronocycle Authors. All Rights Reserved.
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

namespace chronocycle {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a precondition (degenerate series, bad chain, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// The linear-programming backend failed to produce an optimal solution.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Malformed command line or configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace chronocycle

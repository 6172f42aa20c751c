// Copyright 2026 The cdsqc Authors
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

namespace cdsqc {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid session / channel configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A block would exceed the dense simulation limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A controlled-channel non-degeneracy condition does not hold.
class ConditionError : public Error {
 public:
  using Error::Error;
};

/// Operation invoked out of protocol order (e.g. decode before disclosure).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Malformed transcript document or CLI text form.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdsqc

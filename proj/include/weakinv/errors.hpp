// Copyright 2026 The weakinv Authors
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

namespace weakinv {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands have incompatible or invalid dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to reach its accuracy contract.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A matrix violates the density-matrix invariants (trace one, PSD).
class InvalidStateError : public Error {
public:
    using Error::Error;
};

/// A Kraus family violates the trace-preserving condition.
class InvalidChannelError : public Error {
public:
    using Error::Error;
};

/// A stiffness schedule violates k >= 0 or dk/dt <= 0.
class InvalidScheduleError : public Error {
public:
    using Error::Error;
};

/// Time stepping failed (for example positivity loss beyond tolerance).
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Initial-state population leaks into the truncation edge of a Fock space.
class TruncationLeakageError : public Error {
public:
    using Error::Error;
};

/// Scenario configuration is malformed or inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace weakinv

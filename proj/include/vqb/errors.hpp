// Copyright 2026 The vqbsim developers
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

namespace vqb {

// Base class for all vqbsim errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// A caller-supplied argument is invalid (bad flag value, out-of-range
// parameter, unknown label). CLI exit code 2.
class ArgumentError : public Error {
public:
  explicit ArgumentError(const std::string &msg) : Error(msg) {}
};

// Operand shapes or declared subsystem dimensions do not match.
class DimensionError : public ArgumentError {
public:
  explicit DimensionError(const std::string &msg) : ArgumentError(msg) {}
};

// Requested operation is not defined for the given dimension (e.g. Pauli
// expectations on a non-qubit subsystem).
class UnsupportedError : public ArgumentError {
public:
  explicit UnsupportedError(const std::string &msg) : ArgumentError(msg) {}
};

// A value failed its type invariants (non-Hermitian density matrix,
// trace off by more than tolerance, ...). CLI exit code 3.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string &msg) : Error(msg) {}
};

// An internal pre/postcondition broke (non-unitary gate, non-Hermitian
// input to the Hermitian eigensolver, ...). CLI exit code 4.
class ContractViolation : public Error {
public:
  explicit ContractViolation(const std::string &msg) : Error(msg) {}
};

} // namespace vqb

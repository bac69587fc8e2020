// Copyright 2026 The catfilter Authors
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

namespace catfilter {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the command line front end.
class Error : public std::runtime_error {
   public:
    Error(std::string kind, const std::string &message) : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string &kind() const noexcept { return kind_; }

   private:
    std::string kind_;
};

/// An argument is outside the documented domain of an operation.
struct DomainError : Error {
    explicit DomainError(const std::string &message) : Error("domain", message) {}
};

/// Two objects that must share a shape (Fock cutoff, time grid) do not.
struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string &message) : Error("shape_mismatch", message) {}
};

/// The Fock cutoff is too small to represent a state faithfully.
struct TruncationError : Error {
    explicit TruncationError(const std::string &message) : Error("truncation", message) {}
};

/// A conditional operation was requested on an event of (numerically) zero probability.
struct DegenerateHerald : Error {
    DegenerateHerald(const std::string &message, double probability)
        : Error("degenerate_herald", message), probability_(probability) {}
    double probability() const noexcept { return probability_; }

   private:
    double probability_;
};

/// An iterative solver failed to converge or hit a numerical pathology.
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string &message) : Error("convergence", message) {}
};

/// A physical model has no solution for the supplied inputs.
struct ModelViolation : Error {
    explicit ModelViolation(const std::string &message) : Error("model_violation", message) {}
};

/// A file could not be read or written.
struct IoError : Error {
    explicit IoError(const std::string &message) : Error("io", message) {}
};

/// Malformed configuration or data file. `line` is 0 when not applicable.
struct ParseError : Error {
    ParseError(const std::string &message, int line = 0)
        : Error("parse", line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
    int line() const noexcept { return line_; }

   private:
    int line_;
};

}  // namespace catfilter

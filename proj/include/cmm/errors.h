// Copyright 2026 The CMM Authors
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
#ifndef CMM_ERRORS_H
#define CMM_ERRORS_H

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmm {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matrix dimensions do not fit the requested operation.
struct ShapeError : Error {
    using Error::Error;
};

/// Input lies outside the mathematical domain of an operation (e.g. a non-Hermitian matrix).
struct DomainError : Error {
    using Error::Error;
};

/// Unknown context, observable, instrument, outcome or coordinate.
struct LookupError : Error {
    using Error::Error;
};

/// Conditioning on an outcome whose probability is below the conditioning threshold.
struct ConditioningError : Error {
    using Error::Error;
};

/// An operation's precondition does not hold (e.g. CHSH on a conditionally incompatible pair).
struct PreconditionError : Error {
    using Error::Error;
};

/// Malformed user input (repeated outcomes, partial maps, bad files).
struct InputError : Error {
    using Error::Error;
};

/// A constructed object violates one of its invariants. Carries the invariant name and residual.
struct InvariantError : Error {
    InvariantError(std::string invariant_name, double max_residual, const std::string &detail)
        : Error(invariant_name + " violated (residual " + format_residual(max_residual) + ")" +
                (detail.empty() ? std::string() : ": " + detail)),
          invariant(std::move(invariant_name)),
          residual(max_residual) {
    }
    std::string invariant;
    double residual;

    static std::string format_residual(double r) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", r);
        return buf;
    }
};

/// Result of one invariant test, as listed by validation reports.
struct InvariantCheck {
    std::string name;
    bool passed;
    double residual;
};

/// Throws InvariantError for the first failed check.
inline void require_all(const std::vector<InvariantCheck> &checks, const std::string &what) {
    for (const auto &c : checks) {
        if (!c.passed) {
            throw InvariantError(c.name, c.residual, what);
        }
    }
}

}  // namespace cmm

#endif

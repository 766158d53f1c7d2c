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
#ifndef CMM_TOLERANCES_H
#define CMM_TOLERANCES_H

#include <string_view>

namespace cmm {

/// Every numeric comparison in the library reads its threshold from one of these fields.
struct Tolerances {
    /// An outcome with probability at or below this is outside the domain of its update map.
    double eps_cond = 1e-12;
    /// Order-effect discrepancy threshold.
    double eps_oe = 1e-9;
    /// Conditional-probability difference that counts as dependence.
    double eps_dep = 1e-9;
    /// Slack for "conditional probability equals one".
    double eps_epr = 1e-9;
    /// Slack for exact identities (replicability, RRE, Bayes agreement).
    double eps_identity = 1e-9;
    /// Relative eigenvalue clustering threshold.
    double cluster = 1e-8;
    /// Max-norm slack accepted when checking a matrix is Hermitian.
    double hermitian = 1e-12;
    /// Slack for PSD tests and operator identities (POVM sums, Kraus normalization).
    double operator_identity = 1e-9;
    /// Slack on state normalization (trace, Hermiticity of density matrices).
    double state = 1e-10;
    /// Classical weights must sum to one within this.
    double weights = 1e-12;
    /// |lambda| <= 1 + this is classified as trigonometric interference.
    double lambda_slack = 1e-9;

    /// Sets a field by name; returns false if the name is unknown.
    bool set(std::string_view name, double value);
};

inline bool Tolerances::set(std::string_view name, double value) {
    struct Entry {
        std::string_view key;
        double Tolerances::*field;
    };
    static constexpr Entry entries[] = {
        {"eps_cond", &Tolerances::eps_cond},
        {"eps_oe", &Tolerances::eps_oe},
        {"eps_dep", &Tolerances::eps_dep},
        {"eps_epr", &Tolerances::eps_epr},
        {"eps_identity", &Tolerances::eps_identity},
        {"cluster", &Tolerances::cluster},
        {"hermitian", &Tolerances::hermitian},
        {"operator_identity", &Tolerances::operator_identity},
        {"state", &Tolerances::state},
        {"weights", &Tolerances::weights},
        {"lambda_slack", &Tolerances::lambda_slack},
    };
    for (const auto &e : entries) {
        if (e.key == name) {
            this->*(e.field) = value;
            return true;
        }
    }
    return false;
}

}  // namespace cmm

#endif

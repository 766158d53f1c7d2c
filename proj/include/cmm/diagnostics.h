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
#ifndef CMM_DIAGNOSTICS_H
#define CMM_DIAGNOSTICS_H

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmm/contextual_model.h"

namespace cmm {

// Backend-agnostic calculus over any ContextualModel. Instruments and observables are passed by name.

/// One step of a sequential measurement: the instrument used and the outcome index recorded.
struct MeasurementStep {
    std::string_view instrument;
    std::size_t outcome;
};

/// P_C^A, validated to be nonnegative and normalized.
Distribution prob_dist(const ContextualModel &model, const Context &context, std::string_view observable);

/// Sum of x P_C(A = x). Throws DomainError when an outcome has no numeric value.
double average(const ContextualModel &model, const Context &context, std::string_view observable);

/// P_{T_A(x)C}(B = y). Throws ConditioningError when P_C(A = x) <= eps_cond.
double conditional_prob(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                        std::size_t x, std::string_view observable_b, std::size_t y);

/// Probability of a chain of outcomes obtained by successive updates. A step whose update is
/// undefined contributes zero.
double sequential_prob(const ContextualModel &model, const Context &context, std::span<const MeasurementStep> steps);

/// Row-major |X_A| x |X_B| table.
struct JointDistribution {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> p;

    double operator()(std::size_t x, std::size_t y) const {
        return p[x * cols + y];
    }
    double &operator()(std::size_t x, std::size_t y) {
        return p[x * cols + y];
    }
    std::vector<double> row_marginal() const;
    std::vector<double> col_marginal() const;
};

/// P_C(A = x, B = y) = P_C(A = x) P_C(B = y | A = x), with A measured first by instrument_a.
JointDistribution conditional_jpd(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                                  std::string_view observable_b);

struct OrderEffect {
    bool present = false;
    double max_discrepancy = 0;
    /// Outcome indices (x of A, y of B) where the discrepancy peaks.
    std::size_t x = 0;
    std::size_t y = 0;
};

/// Compares A-then-B with B-then-A sequential joint probabilities.
OrderEffect order_effect(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                         std::string_view instrument_b);

bool conditionally_compatible(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                              std::string_view instrument_b);

/// Posterior over the outcomes of B ("hypotheses") after observing A = x, by Bayes' theorem in its
/// total-probability form. Throws PreconditionError unless the pair is conditionally compatible.
std::vector<double> bayes_infer(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                                std::size_t x, std::string_view instrument_b);

enum class InterferenceRegime { trigonometric, hyperbolic, degenerate };

std::string_view to_string(InterferenceRegime regime);

struct InterferenceDatum {
    /// P_C(B = y) minus the classical total-probability sum.
    double delta = 0;
    double p_b = 0;
    double classical_sum = 0;
    /// Normalized coefficient; only defined for dichotomous A with non-degenerate factors.
    std::optional<double> lambda;
    InterferenceRegime regime = InterferenceRegime::degenerate;
    /// arccos(lambda), trigonometric regime only.
    std::optional<double> theta;
    /// Sign of delta (-1, 0, +1); the hyperbolic regime reports only lambda and this sign.
    int sign = 0;

    bool operator==(const InterferenceDatum &) const = default;
};

InterferenceDatum ftp_interference(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                                   std::string_view observable_b, std::size_t y);

/// Derives lambda, regime and theta for a dichotomous A from the four factors and delta.
void classify_interference(InterferenceDatum &datum, std::span<const double> p_a, std::span<const double> p_b_given_a,
                           const Tolerances &tol);

/// Boolean outcome plus the largest residual or margin observed.
struct Check {
    bool holds = false;
    double residual = 0;

    explicit operator bool() const {
        return holds;
    }
};

/// P_{C_{A=x}}(A = x) = 1 for every admissible x.
Check replicability(const ContextualModel &model, const Context &context, std::string_view instrument_a);

/// Both triple-sequence identities A-B-A and B-A-B.
Check rre_check(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                std::string_view instrument_b);

/// Sum of x y P_C(A = x, B = y). Throws PreconditionError for conditionally incompatible pairs.
double correlation(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                   std::string_view instrument_b);

struct ChshEvaluation {
    double value = 0;
    /// correlations[i][j] = <A_i B_j>
    std::array<std::array<double, 2>, 2> correlations{};
    /// True when computed with force on a pair that is not conditionally compatible.
    bool sequential = false;
};

/// |<A1B1> + <A2B1> + <A1B2> - <A2B2>|. Without force every pair must be conditionally compatible;
/// with force the A-then-B correlation is used and the result is flagged as sequential.
ChshEvaluation chsh_value(const ContextualModel &model, const Context &context,
                          const std::array<std::string_view, 2> &instruments_a,
                          const std::array<std::string_view, 2> &instruments_b, bool force = false);

/// Whether B = beta depends on the outcome of A. Throws PreconditionError with fewer than two
/// admissible A outcomes.
bool depends_on(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                std::string_view observable_b, std::size_t beta);

bool ab_entangled(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                  std::string_view observable_b);

struct Concurrence {
    double value = 0;
    /// Some A outcomes were excluded because they cannot be conditioned on.
    bool degenerate = false;
    std::vector<std::size_t> excluded;
};

/// Sum over beta and unordered pairs alpha != alpha' of |P(B=beta|A=alpha) - P(B=beta|A=alpha')|.
Concurrence concurrence(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                        std::string_view observable_b);

/// 2 |P(B=+|A=-) - P(B=+|A=+)| for dichotomous A and B.
double concurrence_dichotomous(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                               std::string_view observable_b);

struct EprResult {
    bool holds = false;
    bool complete = false;
};

/// Perfect conditional correlation on every (alpha, beta) in gamma. Throws InputError when an alpha
/// repeats.
EprResult epr_entangled(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                        std::string_view observable_b, std::span<const std::pair<std::size_t, std::size_t>> gamma);

}  // namespace cmm

#endif

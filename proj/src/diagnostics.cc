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
#include "cmm/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "cmm/errors.h"

namespace cmm {

namespace {

std::string outcome_name(const ContextualModel &model, std::string_view observable, std::size_t x) {
    const auto &outs = model.outcomes(observable);
    return x < outs.size() ? outs[x].label : "#" + std::to_string(x);
}

void require_outcome(const ContextualModel &model, std::string_view observable, std::size_t x) {
    if (x >= model.outcomes(observable).size()) {
        throw LookupError("observable '" + std::string(observable) + "' has no outcome index " + std::to_string(x));
    }
}

Context require_update(const ContextualModel &model, const Context &context, std::string_view instrument,
                       std::size_t x) {
    auto updated = model.update(context, instrument, x);
    if (!updated) {
        throw ConditioningError("cannot condition on " + std::string(instrument) + " = " +
                                outcome_name(model, model.observable_of(instrument), x) + " in context " +
                                context->describe() + ": outcome probability is below eps_cond");
    }
    return *updated;
}

/// P_C(B = . | A = x) for every admissible x; rows of inadmissible outcomes are empty.
std::vector<std::vector<double>> conditional_rows(const ContextualModel &model, const Context &context,
                                                  std::string_view instrument_a, std::string_view observable_b,
                                                  const Distribution &p_a) {
    const double eps = model.tolerances().eps_cond;
    std::vector<std::vector<double>> rows(p_a.size());
    for (std::size_t x = 0; x < p_a.size(); ++x) {
        if (p_a[x] <= eps) {
            continue;
        }
        auto updated = model.update(context, instrument_a, x);
        if (updated) {
            rows[x] = prob_dist(model, *updated, observable_b);
        }
    }
    return rows;
}

void require_numeric(const ContextualModel &model, std::string_view observable) {
    for (const auto &o : model.outcomes(observable)) {
        if (!o.numeric()) {
            throw DomainError("observable '" + std::string(observable) + "' has non-numeric outcome '" + o.label +
                              "'");
        }
    }
}

}  // namespace

std::vector<double> JointDistribution::row_marginal() const {
    std::vector<double> m(rows, 0.0);
    for (std::size_t x = 0; x < rows; ++x) {
        for (std::size_t y = 0; y < cols; ++y) {
            m[x] += (*this)(x, y);
        }
    }
    return m;
}

std::vector<double> JointDistribution::col_marginal() const {
    std::vector<double> m(cols, 0.0);
    for (std::size_t x = 0; x < rows; ++x) {
        for (std::size_t y = 0; y < cols; ++y) {
            m[y] += (*this)(x, y);
        }
    }
    return m;
}

Distribution prob_dist(const ContextualModel &model, const Context &context, std::string_view observable) {
    Distribution p = model.distribution(context, observable);
    const double tol = model.tolerances().state;
    double sum = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!(p[k] >= -tol) || !std::isfinite(p[k])) {
            throw InvariantError("distribution nonnegative", -p[k],
                                 std::string(observable) + " = " + outcome_name(model, observable, k));
        }
        sum += p[k];
    }
    if (!(std::abs(sum - 1.0) <= tol)) {
        throw InvariantError("distribution normalized", std::abs(sum - 1.0), std::string(observable));
    }
    return p;
}

double average(const ContextualModel &model, const Context &context, std::string_view observable) {
    require_numeric(model, observable);
    const auto &outs = model.outcomes(observable);
    Distribution p = prob_dist(model, context, observable);
    double acc = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        acc += outs[k].value * p[k];
    }
    return acc;
}

double conditional_prob(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                        std::size_t x, std::string_view observable_b, std::size_t y) {
    require_outcome(model, model.observable_of(instrument_a), x);
    require_outcome(model, observable_b, y);
    Distribution p_a = prob_dist(model, context, model.observable_of(instrument_a));
    if (p_a[x] <= model.tolerances().eps_cond) {
        throw ConditioningError("cannot condition on " + std::string(instrument_a) + " = " +
                                outcome_name(model, model.observable_of(instrument_a), x) + " in context " +
                                context->describe() + ": P = " + std::to_string(p_a[x]));
    }
    Context updated = require_update(model, context, instrument_a, x);
    return prob_dist(model, updated, observable_b)[y];
}

double sequential_prob(const ContextualModel &model, const Context &context, std::span<const MeasurementStep> steps) {
    const double eps = model.tolerances().eps_cond;
    Context current = context;
    double p = 1.0;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto &step = steps[k];
        const std::string &obs = model.observable_of(step.instrument);
        require_outcome(model, obs, step.outcome);
        double q = prob_dist(model, current, obs)[step.outcome];
        p *= q;
        if (k + 1 == steps.size()) {
            break;
        }
        if (q <= eps) {
            return 0.0;
        }
        auto updated = model.update(current, step.instrument, step.outcome);
        if (!updated) {
            return 0.0;
        }
        current = *updated;
    }
    return p;
}

JointDistribution conditional_jpd(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                                  std::string_view observable_b) {
    Distribution p_a = prob_dist(model, context, model.observable_of(instrument_a));
    auto rows = conditional_rows(model, context, instrument_a, observable_b, p_a);
    JointDistribution j;
    j.rows = p_a.size();
    j.cols = model.outcomes(observable_b).size();
    j.p.assign(j.rows * j.cols, 0.0);
    for (std::size_t x = 0; x < j.rows; ++x) {
        if (rows[x].empty()) {
            continue;
        }
        for (std::size_t y = 0; y < j.cols; ++y) {
            j(x, y) = p_a[x] * rows[x][y];
        }
    }
    return j;
}

OrderEffect order_effect(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                         std::string_view instrument_b) {
    JointDistribution ab = conditional_jpd(model, context, instrument_a, model.observable_of(instrument_b));
    JointDistribution ba = conditional_jpd(model, context, instrument_b, model.observable_of(instrument_a));
    OrderEffect oe;
    for (std::size_t x = 0; x < ab.rows; ++x) {
        for (std::size_t y = 0; y < ab.cols; ++y) {
            double d = std::abs(ab(x, y) - ba(y, x));
            if (d > oe.max_discrepancy) {
                oe.max_discrepancy = d;
                oe.x = x;
                oe.y = y;
            }
        }
    }
    oe.present = oe.max_discrepancy > model.tolerances().eps_oe;
    return oe;
}

bool conditionally_compatible(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                              std::string_view instrument_b) {
    return !order_effect(model, context, instrument_a, instrument_b).present;
}

std::vector<double> bayes_infer(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                                std::size_t x, std::string_view instrument_b) {
    if (!conditionally_compatible(model, context, instrument_a, instrument_b)) {
        throw PreconditionError("bayes_infer: " + std::string(instrument_a) + " and " + std::string(instrument_b) +
                                " are not conditionally compatible in context " + context->describe());
    }
    const std::string &obs_a = model.observable_of(instrument_a);
    const std::string &obs_b = model.observable_of(instrument_b);
    require_outcome(model, obs_a, x);
    Distribution p_a = prob_dist(model, context, obs_a);
    if (p_a[x] <= model.tolerances().eps_cond) {
        throw ConditioningError("bayes_infer: evidence " + std::string(instrument_a) + " = " +
                                outcome_name(model, obs_a, x) + " has probability below eps_cond");
    }
    Distribution prior = prob_dist(model, context, obs_b);
    auto likelihood = conditional_rows(model, context, instrument_b, obs_a, prior);
    std::vector<double> joint(prior.size(), 0.0);
    double evidence = 0;
    for (std::size_t j = 0; j < prior.size(); ++j) {
        if (likelihood[j].empty()) {
            continue;
        }
        joint[j] = prior[j] * likelihood[j][x];
        evidence += joint[j];
    }
    if (!(evidence > 0)) {
        throw ConditioningError("bayes_infer: total evidence vanishes");
    }
    for (auto &v : joint) {
        v /= evidence;
    }
    return joint;
}

std::string_view to_string(InterferenceRegime regime) {
    switch (regime) {
        case InterferenceRegime::trigonometric:
            return "trigonometric";
        case InterferenceRegime::hyperbolic:
            return "hyperbolic";
        case InterferenceRegime::degenerate:
            return "degenerate";
    }
    return "unknown";
}

void classify_interference(InterferenceDatum &datum, std::span<const double> p_a, std::span<const double> p_b_given_a,
                           const Tolerances &tol) {
    datum.sign = datum.delta > 0 ? 1 : (datum.delta < 0 ? -1 : 0);
    datum.lambda.reset();
    datum.theta.reset();
    datum.regime = InterferenceRegime::degenerate;
    if (p_a.size() != 2 || p_b_given_a.size() != 2) {
        return;
    }
    for (double f : {p_a[0], p_a[1], p_b_given_a[0], p_b_given_a[1]}) {
        if (f < tol.eps_cond) {
            return;
        }
    }
    double root = std::sqrt(p_b_given_a[0] * p_a[0] * p_b_given_a[1] * p_a[1]);
    double lambda = datum.delta / (2.0 * root);
    datum.lambda = lambda;
    if (std::abs(lambda) <= 1.0 + tol.lambda_slack) {
        datum.regime = InterferenceRegime::trigonometric;
        datum.theta = std::acos(std::clamp(lambda, -1.0, 1.0));
    } else {
        datum.regime = InterferenceRegime::hyperbolic;
    }
}

InterferenceDatum ftp_interference(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                                   std::string_view observable_b, std::size_t y) {
    require_outcome(model, observable_b, y);
    Distribution p_a = prob_dist(model, context, model.observable_of(instrument_a));
    auto rows = conditional_rows(model, context, instrument_a, observable_b, p_a);
    InterferenceDatum d;
    d.p_b = prob_dist(model, context, observable_b)[y];
    std::vector<double> cond(p_a.size(), 0.0);
    for (std::size_t x = 0; x < p_a.size(); ++x) {
        if (!rows[x].empty()) {
            cond[x] = rows[x][y];
            d.classical_sum += cond[x] * p_a[x];
        }
    }
    d.delta = d.p_b - d.classical_sum;
    classify_interference(d, p_a, cond, model.tolerances());
    return d;
}

Check replicability(const ContextualModel &model, const Context &context, std::string_view instrument_a) {
    const std::string &obs = model.observable_of(instrument_a);
    Distribution p_a = prob_dist(model, context, obs);
    Check c;
    for (std::size_t x = 0; x < p_a.size(); ++x) {
        if (p_a[x] <= model.tolerances().eps_cond) {
            continue;
        }
        Context updated = require_update(model, context, instrument_a, x);
        c.residual = std::max(c.residual, std::abs(1.0 - prob_dist(model, updated, obs)[x]));
    }
    c.holds = c.residual <= model.tolerances().eps_identity;
    return c;
}

Check rre_check(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                std::string_view instrument_b) {
    const std::size_t na = model.instrument_outcomes(instrument_a).size();
    const std::size_t nb = model.instrument_outcomes(instrument_b).size();
    Check c;
    for (std::size_t x = 0; x < na; ++x) {
        for (std::size_t y = 0; y < nb; ++y) {
            const MeasurementStep aba[] = {{instrument_a, x}, {instrument_b, y}, {instrument_a, x}};
            const MeasurementStep bab[] = {{instrument_b, y}, {instrument_a, x}, {instrument_b, y}};
            double r1 = std::abs(sequential_prob(model, context, aba) -
                                 sequential_prob(model, context, std::span(aba).first(2)));
            double r2 = std::abs(sequential_prob(model, context, bab) -
                                 sequential_prob(model, context, std::span(bab).first(2)));
            c.residual = std::max({c.residual, r1, r2});
        }
    }
    c.holds = c.residual <= model.tolerances().eps_identity;
    return c;
}

namespace {

double correlation_unchecked(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                             std::string_view instrument_b) {
    const std::string &obs_a = model.observable_of(instrument_a);
    const std::string &obs_b = model.observable_of(instrument_b);
    require_numeric(model, obs_a);
    require_numeric(model, obs_b);
    JointDistribution j = conditional_jpd(model, context, instrument_a, obs_b);
    const auto &xa = model.outcomes(obs_a);
    const auto &xb = model.outcomes(obs_b);
    double acc = 0;
    for (std::size_t x = 0; x < j.rows; ++x) {
        for (std::size_t y = 0; y < j.cols; ++y) {
            acc += xa[x].value * xb[y].value * j(x, y);
        }
    }
    return acc;
}

}  // namespace

double correlation(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                   std::string_view instrument_b) {
    if (!conditionally_compatible(model, context, instrument_a, instrument_b)) {
        throw PreconditionError("correlation: " + std::string(instrument_a) + " and " + std::string(instrument_b) +
                                " are not conditionally compatible in context " + context->describe());
    }
    return correlation_unchecked(model, context, instrument_a, instrument_b);
}

ChshEvaluation chsh_value(const ContextualModel &model, const Context &context,
                          const std::array<std::string_view, 2> &instruments_a,
                          const std::array<std::string_view, 2> &instruments_b, bool force) {
    ChshEvaluation out;
    for (auto inst : {instruments_a[0], instruments_a[1], instruments_b[0], instruments_b[1]}) {
        for (const auto &o : model.instrument_outcomes(inst)) {
            if (!o.numeric() || o.value < -1.0 - 1e-12 || o.value > 1.0 + 1e-12) {
                throw DomainError("chsh_value: outcomes of '" + std::string(inst) + "' must lie in [-1, 1]");
            }
        }
    }
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            if (!conditionally_compatible(model, context, instruments_a[i], instruments_b[j])) {
                if (!force) {
                    throw PreconditionError("chsh_value: " + std::string(instruments_a[i]) + " and " +
                                            std::string(instruments_b[j]) + " are not conditionally compatible");
                }
                out.sequential = true;
            }
            out.correlations[i][j] = correlation_unchecked(model, context, instruments_a[i], instruments_b[j]);
        }
    }
    const auto &e = out.correlations;
    out.value = std::abs(e[0][0] + e[1][0] + e[0][1] - e[1][1]);
    return out;
}

namespace {

struct Conditionals {
    std::vector<std::size_t> admissible;
    std::vector<std::size_t> excluded;
    std::vector<std::vector<double>> rows;
};

Conditionals conditionals_given_a(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                                  std::string_view observable_b) {
    Distribution p_a = prob_dist(model, context, model.observable_of(instrument_a));
    Conditionals c;
    c.rows = conditional_rows(model, context, instrument_a, observable_b, p_a);
    for (std::size_t x = 0; x < p_a.size(); ++x) {
        (c.rows[x].empty() ? c.excluded : c.admissible).push_back(x);
    }
    return c;
}

bool depends_with(const Conditionals &c, std::size_t beta, double eps) {
    double lo = 1, hi = 0;
    for (auto a : c.admissible) {
        lo = std::min(lo, c.rows[a][beta]);
        hi = std::max(hi, c.rows[a][beta]);
    }
    return hi - lo > eps;
}

}  // namespace

bool depends_on(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                std::string_view observable_b, std::size_t beta) {
    require_outcome(model, observable_b, beta);
    Conditionals c = conditionals_given_a(model, context, instrument_a, observable_b);
    if (c.admissible.size() < 2) {
        throw PreconditionError("depends_on: fewer than two outcomes of " + std::string(instrument_a) +
                                " can be conditioned on");
    }
    return depends_with(c, beta, model.tolerances().eps_dep);
}

bool ab_entangled(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                  std::string_view observable_b) {
    Conditionals c = conditionals_given_a(model, context, instrument_a, observable_b);
    if (c.admissible.size() < 2) {
        throw PreconditionError("ab_entangled: fewer than two outcomes of " + std::string(instrument_a) +
                                " can be conditioned on");
    }
    const std::size_t nb = model.outcomes(observable_b).size();
    for (std::size_t beta = 0; beta < nb; ++beta) {
        if (!depends_with(c, beta, model.tolerances().eps_dep)) {
            return false;
        }
    }
    return true;
}

Concurrence concurrence(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                        std::string_view observable_b) {
    Conditionals c = conditionals_given_a(model, context, instrument_a, observable_b);
    Concurrence out;
    out.excluded = c.excluded;
    out.degenerate = !c.excluded.empty();
    const std::size_t nb = model.outcomes(observable_b).size();
    for (std::size_t beta = 0; beta < nb; ++beta) {
        for (std::size_t i = 0; i < c.admissible.size(); ++i) {
            for (std::size_t j = i + 1; j < c.admissible.size(); ++j) {
                out.value += std::abs(c.rows[c.admissible[i]][beta] - c.rows[c.admissible[j]][beta]);
            }
        }
    }
    return out;
}

double concurrence_dichotomous(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                               std::string_view observable_b) {
    if (model.instrument_outcomes(instrument_a).size() != 2 || model.outcomes(observable_b).size() != 2) {
        throw DomainError("concurrence_dichotomous: both observables must have two outcomes");
    }
    double plus_given_second = conditional_prob(model, context, instrument_a, 1, observable_b, 0);
    double plus_given_first = conditional_prob(model, context, instrument_a, 0, observable_b, 0);
    return 2.0 * std::abs(plus_given_second - plus_given_first);
}

EprResult epr_entangled(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                        std::string_view observable_b, std::span<const std::pair<std::size_t, std::size_t>> gamma) {
    const std::string &obs_a = model.observable_of(instrument_a);
    const std::size_t na = model.outcomes(obs_a).size();
    const std::size_t nb = model.outcomes(observable_b).size();
    std::set<std::size_t> alphas, betas;
    for (const auto &[alpha, beta] : gamma) {
        require_outcome(model, obs_a, alpha);
        require_outcome(model, observable_b, beta);
        if (!alphas.insert(alpha).second) {
            throw InputError("epr_entangled: outcome " + outcome_name(model, obs_a, alpha) + " of " +
                             std::string(instrument_a) + " appears twice in gamma");
        }
        betas.insert(beta);
    }
    EprResult r;
    r.complete = alphas.size() == na && betas.size() == nb && gamma.size() == na && gamma.size() == nb;
    r.holds = true;
    for (const auto &[alpha, beta] : gamma) {
        double p = conditional_prob(model, context, instrument_a, alpha, observable_b, beta);
        if (p < 1.0 - model.tolerances().eps_epr) {
            r.holds = false;
        }
    }
    return r;
}

}  // namespace cmm

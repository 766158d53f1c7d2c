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
#include "cmm/classical.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "cmm/errors.h"

namespace cmm {

namespace {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

/// Pushforward of the context's conditional measure as value -> probability.
std::map<double, double> pushforward(const FiniteProbSpace &space, Event context, const RandomVariable &a) {
    std::map<double, double> out;
    double pc = space.measure(context);
    for (std::size_t w = 0; w < space.size(); ++w) {
        if (context.contains(w) && space.weight(w) > 0) {
            out[a(w)] += space.weight(w) / pc;
        }
    }
    return out;
}

bool same_distribution(const std::map<double, double> &p, const std::map<double, double> &q, double tol) {
    std::set<double> keys;
    for (auto &[k, v] : p) {
        keys.insert(k);
    }
    for (auto &[k, v] : q) {
        keys.insert(k);
    }
    for (double k : keys) {
        auto ip = p.find(k);
        auto iq = q.find(k);
        double a = ip == p.end() ? 0.0 : ip->second;
        double b = iq == q.end() ? 0.0 : iq->second;
        if (std::abs(a - b) > tol) {
            return false;
        }
    }
    return true;
}

}  // namespace

Event Event::of(std::initializer_list<std::size_t> points) {
    std::uint64_t bits = 0;
    for (auto p : points) {
        if (p >= 64) {
            throw InputError("Event: point index " + std::to_string(p) + " out of range");
        }
        bits |= 1ull << p;
    }
    return Event(bits);
}

FiniteProbSpace::FiniteProbSpace(std::vector<std::string> labels, std::vector<double> weights, double weight_tol)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
    if (labels_.size() != weights_.size()) {
        throw InputError("FiniteProbSpace: " + std::to_string(labels_.size()) + " labels but " +
                         std::to_string(weights_.size()) + " weights");
    }
    if (weights_.empty()) {
        throw InputError("FiniteProbSpace: empty sample space");
    }
    if (weights_.size() > max_points) {
        throw InputError("FiniteProbSpace: at most 64 points are supported, got " + std::to_string(weights_.size()));
    }
    std::set<std::string> seen;
    double sum = 0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        if (!seen.insert(labels_[k]).second) {
            throw InputError("FiniteProbSpace: duplicate point label '" + labels_[k] + "'");
        }
        if (!std::isfinite(weights_[k]) || weights_[k] < 0) {
            throw InvariantError("weights nonnegative", std::isfinite(weights_[k]) ? -weights_[k] : INFINITY,
                                 "point '" + labels_[k] + "' has weight " + format_value(weights_[k]));
        }
        sum += weights_[k];
    }
    if (!(std::abs(sum - 1.0) <= weight_tol)) {
        throw InvariantError("weights sum to 1", std::abs(sum - 1.0), "sum is " + format_value(sum));
    }
}

FiniteProbSpace FiniteProbSpace::with_weights(std::vector<double> weights) {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        labels.push_back(std::to_string(k + 1));
    }
    return FiniteProbSpace(std::move(labels), std::move(weights));
}

FiniteProbSpace FiniteProbSpace::uniform(std::size_t n) {
    return with_weights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::size_t FiniteProbSpace::index_of(std::string_view label) const {
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (labels_[k] == label) {
            return k;
        }
    }
    throw LookupError("unknown sample point '" + std::string(label) + "'");
}

double FiniteProbSpace::measure(Event e) const {
    double m = 0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        if (e.contains(k)) {
            m += weights_[k];
        }
    }
    return m;
}

Event FiniteProbSpace::null_points() const {
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        if (weights_[k] == 0) {
            bits |= 1ull << k;
        }
    }
    return Event(bits);
}

std::string FiniteProbSpace::describe(Event e) const {
    std::string s = "{";
    bool first = true;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (e.contains(k)) {
            s += (first ? "" : ",") + labels_[k];
            first = false;
        }
    }
    return s + "}";
}

RandomVariable::RandomVariable(std::string name, std::vector<double> values)
    : name_(std::move(name)), values_(std::move(values)) {
    if (values_.size() > FiniteProbSpace::max_points) {
        throw InputError("RandomVariable '" + name_ + "': too many points");
    }
    std::set<double> distinct;
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw InputError("RandomVariable '" + name_ + "': non-finite value");
        }
        distinct.insert(v);
    }
    for (double v : distinct) {
        outcomes_.push_back({format_value(v), v});
    }
}

std::size_t RandomVariable::outcome_index(double value) const {
    for (std::size_t k = 0; k < outcomes_.size(); ++k) {
        if (outcomes_[k].value == value) {
            return k;
        }
    }
    throw LookupError("random variable '" + name_ + "' never takes the value " + format_value(value));
}

Event RandomVariable::level_set(std::size_t outcome) const {
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (values_[k] == outcomes_.at(outcome).value) {
            bits |= 1ull << k;
        }
    }
    return Event(bits);
}

RandomVariable indicator(const FiniteProbSpace &space, std::size_t point) {
    std::vector<double> v(space.size(), 0.0);
    v.at(point) = 1.0;
    return RandomVariable("1{" + space.labels()[point] + "}", std::move(v));
}

double cond_prob(const FiniteProbSpace &space, Event context, const RandomVariable &a, double x) {
    double pc = space.measure(context);
    if (!(pc > 0)) {
        throw ConditioningError("cond_prob: context " + space.describe(context) + " has probability zero");
    }
    auto it = std::find_if(a.outcomes().begin(), a.outcomes().end(), [&](const Outcome &o) { return o.value == x; });
    if (it == a.outcomes().end()) {
        return 0.0;
    }
    Event level = a.level_set(static_cast<std::size_t>(it - a.outcomes().begin()));
    return space.measure(level & context) / pc;
}

Event context_update(const FiniteProbSpace &space, Event context, const RandomVariable &a, double x) {
    Event level = a.level_set(a.outcome_index(x));
    Event updated = context & level;
    if (!(space.measure(updated) > 0)) {
        throw ConditioningError("context_update: " + space.describe(context) + " intersected with {" + a.name() +
                                " = " + format_value(x) + "} has probability zero");
    }
    return updated;
}

RandomVariable compose_rv(const RandomVariable &a, const std::map<double, double> &f, std::string name) {
    for (const auto &o : a.outcomes()) {
        if (!f.contains(o.value)) {
            throw InputError("compose_rv: map is not defined at outcome " + o.label + " of '" + a.name() + "'");
        }
    }
    return compose_rv(a, std::function<double(double)>([&](double x) { return f.at(x); }), std::move(name));
}

RandomVariable compose_rv(const RandomVariable &a, const std::function<double(double)> &f, std::string name) {
    std::vector<double> v;
    v.reserve(a.values().size());
    for (double x : a.values()) {
        v.push_back(f(x));
    }
    return RandomVariable(name.empty() ? "f(" + a.name() + ")" : std::move(name), std::move(v));
}

namespace {

FiniteProbSpace reduce(const FiniteProbSpace &space, std::vector<std::size_t> &kept) {
    std::vector<std::string> labels;
    std::vector<double> weights;
    double sum = 0;
    for (std::size_t k = 0; k < space.size(); ++k) {
        if (space.weight(k) > 0) {
            kept.push_back(k);
            labels.push_back(space.labels()[k]);
            weights.push_back(space.weight(k));
            sum += space.weight(k);
        }
    }
    // Deleting exact zeros leaves the total unchanged up to rounding already accepted by the original.
    return FiniteProbSpace(std::move(labels), std::move(weights), std::max(1e-12, std::abs(sum - 1.0) * 2));
}

}  // namespace

NullQuotient::NullQuotient(const FiniteProbSpace &space) : original_(space), kept_(), reduced_(reduce(space, kept_)) {
}

Event NullQuotient::canonical(Event e) const {
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < kept_.size(); ++k) {
        if (e.contains(kept_[k])) {
            bits |= 1ull << k;
        }
    }
    return Event(bits);
}

RandomVariable NullQuotient::canonical(const RandomVariable &a) const {
    if (a.values().size() != original_.size()) {
        throw InputError("NullQuotient: random variable '" + a.name() + "' is defined on a different space");
    }
    std::vector<double> v;
    for (auto k : kept_) {
        v.push_back(a(k));
    }
    return RandomVariable(a.name(), std::move(v));
}

bool NullQuotient::equivalent(Event d1, Event d2) const {
    return original_.measure(d1 ^ d2) == 0;
}

bool NullQuotient::equivalent(const RandomVariable &a1, const RandomVariable &a2) const {
    std::uint64_t differ = 0;
    for (std::size_t k = 0; k < original_.size(); ++k) {
        if (a1(k) != a2(k)) {
            differ |= 1ull << k;
        }
    }
    return original_.measure(Event(differ)) == 0;
}

NullQuotient quotient_null(const FiniteProbSpace &space) {
    return NullQuotient(space);
}

ClassicalChsh classical_chsh_exhaustive(const FiniteProbSpace &space, Event context) {
    const double pc = space.measure(context);
    if (pc <= 0) {
        throw ConditioningError("classical_chsh_exhaustive: context has measure zero");
    }
    std::vector<std::size_t> points;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (context.contains(i) && space.weight(i) > 0) {
            points.push_back(i);
        }
    }
    if (points.size() > 12) {
        throw InputError("classical_chsh_exhaustive: more than 12 support points");
    }
    const std::size_t k = points.size();
    ClassicalChsh best;
    best.value = -1;
    for (std::uint64_t m1 = 0; m1 < (1ull << k); ++m1) {
        for (std::uint64_t m2 = 0; m2 < (1ull << k); ++m2) {
            double v = 0;
            for (std::size_t j = 0; j < k; ++j) {
                int a1 = (m1 >> j & 1) ? -1 : 1;
                int a2 = (m2 >> j & 1) ? -1 : 1;
                v += space.weight(points[j]) * (std::abs(a1 + a2) + std::abs(a1 - a2));
            }
            v /= pc;
            if (v > best.value) {
                best.value = v;
                for (auto &var : best.variables) {
                    var.assign(space.size(), 1);
                }
                for (std::size_t j = 0; j < k; ++j) {
                    int a1 = (m1 >> j & 1) ? -1 : 1;
                    int a2 = (m2 >> j & 1) ? -1 : 1;
                    best.variables[0][points[j]] = a1;
                    best.variables[1][points[j]] = a2;
                    best.variables[2][points[j]] = a1 + a2 >= 0 ? 1 : -1;
                    best.variables[3][points[j]] = a1 - a2 >= 0 ? 1 : -1;
                }
            }
        }
    }
    return best;
}

Uniqueness uniqueness_check(const FiniteProbSpace &space, const std::vector<RandomVariable> &variables) {
    const std::size_t n = space.size();
    std::vector<Event> contexts;
    if (n <= 10) {
        for (std::uint64_t bits = 1; bits < (1ull << n); ++bits) {
            if (space.measure(Event(bits)) > 0) {
                contexts.push_back(Event(bits));
            }
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            if (space.weight(k) > 0) {
                contexts.push_back(Event::of({k}));
            }
        }
        contexts.push_back(space.all());
    }

    std::vector<RandomVariable> indicators;
    for (std::size_t k = 0; k < n; ++k) {
        indicators.push_back(indicator(space, k));
    }
    std::vector<RandomVariable> observables = variables;
    observables.insert(observables.end(), indicators.begin(), indicators.end());
    const double tol = 1e-12;

    Uniqueness u;
    u.observables_separated = true;
    for (std::size_t i = 0; i < observables.size() && u.observables_separated; ++i) {
        for (std::size_t j = i + 1; j < observables.size(); ++j) {
            if (observables[i].values() == observables[j].values()) {
                continue;
            }
            bool separated = std::any_of(contexts.begin(), contexts.end(), [&](Event c) {
                return !same_distribution(pushforward(space, c, observables[i]),
                                          pushforward(space, c, observables[j]), tol);
            });
            if (!separated) {
                u.observables_separated = false;
                break;
            }
        }
    }

    // Conditional distribution of every indicator, i.e. the conditional point masses.
    std::vector<std::vector<double>> signature(contexts.size(), std::vector<double>(n));
    for (std::size_t c = 0; c < contexts.size(); ++c) {
        for (std::size_t k = 0; k < n; ++k) {
            signature[c][k] = cond_prob(space, contexts[c], indicators[k], 1.0);
        }
    }
    u.contexts_separated = true;
    for (std::size_t a = 0; a < contexts.size() && u.contexts_separated; ++a) {
        for (std::size_t b = a + 1; b < contexts.size(); ++b) {
            bool same = true;
            for (std::size_t k = 0; k < n && same; ++k) {
                same = std::abs(signature[a][k] - signature[b][k]) <= tol;
            }
            if (same) {
                u.contexts_separated = false;
                break;
            }
        }
    }
    return u;
}

ClassicalModel::ClassicalModel(FiniteProbSpace space, std::vector<RandomVariable> variables,
                               std::vector<std::pair<std::string, Event>> contexts, Tolerances tolerances)
    : ContextualModel(tolerances),
      space_(std::make_shared<const FiniteProbSpace>(std::move(space))),
      variables_(std::move(variables)),
      contexts_(std::move(contexts)) {
    std::set<std::string> names;
    for (const auto &v : variables_) {
        if (v.values().size() != space_->size()) {
            throw InputError("random variable '" + v.name() + "' has " + std::to_string(v.values().size()) +
                             " values for " + std::to_string(space_->size()) + " points");
        }
        if (!names.insert(v.name()).second) {
            throw InputError("duplicate random variable '" + v.name() + "'");
        }
    }
    for (const auto &[name, e] : contexts_) {
        if ((e.bits() & ~space_->all().bits()) != 0) {
            throw InputError("context '" + name + "' contains points outside the sample space");
        }
        if (!(space_->measure(e) > 0)) {
            throw InvariantError("context has positive probability", 0.0, "context '" + name + "'");
        }
    }
}

std::vector<std::string> ClassicalModel::observables() const {
    std::vector<std::string> out;
    for (const auto &v : variables_) {
        out.push_back(v.name());
    }
    return out;
}

const RandomVariable &ClassicalModel::variable(std::string_view name) const {
    for (const auto &v : variables_) {
        if (v.name() == name) {
            return v;
        }
    }
    throw LookupError("unknown random variable '" + std::string(name) + "'");
}

const std::vector<Outcome> &ClassicalModel::outcomes(std::string_view observable) const {
    return variable(observable).outcomes();
}

const std::string &ClassicalModel::observable_of(std::string_view instrument) const {
    return variable(instrument).name();
}

namespace {

Event event_of(const Context &context) {
    auto *c = dynamic_cast<const ClassicalContext *>(context.get());
    if (c == nullptr) {
        throw InputError("context does not belong to a classical model");
    }
    return c->event();
}

}  // namespace

Distribution ClassicalModel::distribution(const Context &context, std::string_view observable) const {
    const RandomVariable &a = variable(observable);
    Event c = event_of(context);
    double pc = space_->measure(c);
    if (!(pc > 0)) {
        throw ConditioningError("context " + space_->describe(c) + " has probability zero");
    }
    Distribution p(a.outcomes().size());
    for (std::size_t x = 0; x < p.size(); ++x) {
        p[x] = space_->measure(a.level_set(x) & c) / pc;
    }
    return p;
}

std::optional<Context> ClassicalModel::update(const Context &context, std::string_view instrument,
                                              std::size_t outcome) const {
    const RandomVariable &a = variable(instrument);
    if (outcome >= a.outcomes().size()) {
        throw LookupError("random variable '" + a.name() + "' has no outcome index " + std::to_string(outcome));
    }
    Event c = event_of(context);
    double pc = space_->measure(c);
    Event updated = c & a.level_set(outcome);
    if (!(pc > 0) || space_->measure(updated) / pc <= tolerances().eps_cond) {
        return std::nullopt;
    }
    return make_context(updated);
}

std::vector<NamedContext> ClassicalModel::named_contexts() const {
    std::vector<NamedContext> out;
    for (const auto &[name, e] : contexts_) {
        out.push_back({name, make_context(e)});
    }
    return out;
}

std::vector<Context> ClassicalModel::default_context_sample(std::uint64_t seed) const {
    if (space_->size() > 10) {
        return ContextualModel::default_context_sample(seed);
    }
    std::vector<Context> out;
    for (std::uint64_t bits = 1; bits < (1ull << space_->size()); ++bits) {
        if (space_->measure(Event(bits)) > 0) {
            out.push_back(make_context(Event(bits)));
        }
    }
    return out;
}

std::optional<ChshClassMaximum> ClassicalModel::chsh_class_maximum(std::uint64_t) const {
    Event support = space_->all() ^ space_->null_points();
    if (support.count() > 12) {
        return std::nullopt;
    }
    ClassicalChsh best = classical_chsh_exhaustive(*space_, space_->all());
    std::string witness;
    const char *names[] = {"A1", "A2", "B1", "B2"};
    for (std::size_t k = 0; k < 4; ++k) {
        witness += std::string(k ? " " : "") + names[k] + "=(";
        for (std::size_t i = 0; i < best.variables[k].size(); ++i) {
            witness += (i ? "," : "") + std::string(best.variables[k][i] > 0 ? "+1" : "-1");
        }
        witness += ")";
    }
    return ChshClassMaximum{best.value, witness};
}

Context ClassicalModel::make_context(Event e) const {
    return std::make_shared<const ClassicalContext>(space_, e);
}

ClassicalModel ClassicalModel::quotiented() const {
    NullQuotient q(*space_);
    std::vector<RandomVariable> vars;
    for (const auto &v : variables_) {
        vars.push_back(q.canonical(v));
    }
    std::vector<std::pair<std::string, Event>> ctx;
    for (const auto &[name, e] : contexts_) {
        ctx.emplace_back(name, q.canonical(e));
    }
    return ClassicalModel(q.space(), std::move(vars), std::move(ctx), tolerances());
}

}  // namespace cmm

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
#ifndef CMM_CLASSICAL_H
#define CMM_CLASSICAL_H

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cmm/contextual_model.h"

namespace cmm {

/// Subset of a sample space with at most 64 points.
class Event {
   public:
    constexpr Event() = default;
    constexpr explicit Event(std::uint64_t bits) : bits_(bits) {
    }
    static Event of(std::initializer_list<std::size_t> points);
    static Event all(std::size_t n) {
        return Event(n >= 64 ? ~0ull : ((1ull << n) - 1));
    }

    bool contains(std::size_t point) const {
        return (bits_ >> point) & 1u;
    }
    std::size_t count() const {
        return static_cast<std::size_t>(std::popcount(bits_));
    }
    bool empty() const {
        return bits_ == 0;
    }
    std::uint64_t bits() const {
        return bits_;
    }

    friend Event operator&(Event a, Event b) {
        return Event(a.bits_ & b.bits_);
    }
    friend Event operator|(Event a, Event b) {
        return Event(a.bits_ | b.bits_);
    }
    /// Symmetric difference.
    friend Event operator^(Event a, Event b) {
        return Event(a.bits_ ^ b.bits_);
    }
    friend bool operator==(Event a, Event b) = default;

   private:
    std::uint64_t bits_ = 0;
};

/// Finite sample space with labeled points and nonnegative weights summing to one.
class FiniteProbSpace {
   public:
    static constexpr std::size_t max_points = 64;

    FiniteProbSpace(std::vector<std::string> labels, std::vector<double> weights, double weight_tol = 1e-12);
    /// n points labeled "1".."n" with the given weights.
    static FiniteProbSpace with_weights(std::vector<double> weights);
    static FiniteProbSpace uniform(std::size_t n);

    std::size_t size() const {
        return weights_.size();
    }
    const std::vector<std::string> &labels() const {
        return labels_;
    }
    const std::vector<double> &weights() const {
        return weights_;
    }
    double weight(std::size_t point) const {
        return weights_[point];
    }
    std::size_t index_of(std::string_view label) const;

    double measure(Event e) const;
    Event all() const {
        return Event::all(size());
    }
    /// Points of zero weight.
    Event null_points() const;
    std::string describe(Event e) const;

   private:
    std::vector<std::string> labels_;
    std::vector<double> weights_;
};

/// Function from sample points to a finite set of reals. Outcomes are the distinct values, ascending.
class RandomVariable {
   public:
    RandomVariable(std::string name, std::vector<double> values);

    const std::string &name() const {
        return name_;
    }
    const std::vector<double> &values() const {
        return values_;
    }
    double operator()(std::size_t point) const {
        return values_[point];
    }
    const std::vector<Outcome> &outcomes() const {
        return outcomes_;
    }
    std::size_t outcome_index(double value) const;
    /// {omega : a(omega) = outcome}
    Event level_set(std::size_t outcome) const;

   private:
    std::string name_;
    std::vector<double> values_;
    std::vector<Outcome> outcomes_;
};

/// Indicator of a single point, named "1{label}".
RandomVariable indicator(const FiniteProbSpace &space, std::size_t point);

/// P(level set of x in C) / P(C). Throws ConditioningError when P(C) = 0.
double cond_prob(const FiniteProbSpace &space, Event context, const RandomVariable &a, double x);

/// C intersected with the level set of x. Throws ConditioningError when the result has measure zero.
Event context_update(const FiniteProbSpace &space, Event context, const RandomVariable &a, double x);

/// f composed with a. Throws InputError when f misses an outcome of a.
RandomVariable compose_rv(const RandomVariable &a, const std::map<double, double> &f, std::string name = {});
RandomVariable compose_rv(const RandomVariable &a, const std::function<double(double)> &f, std::string name = {});

/// Quotient by null sets, realized by deleting zero-weight points.
class NullQuotient {
   public:
    explicit NullQuotient(const FiniteProbSpace &space);

    const FiniteProbSpace &space() const {
        return reduced_;
    }
    /// Original index of each retained point.
    const std::vector<std::size_t> &kept() const {
        return kept_;
    }
    Event canonical(Event e) const;
    RandomVariable canonical(const RandomVariable &a) const;
    /// P(D1 symmetric-difference D2) = 0.
    bool equivalent(Event d1, Event d2) const;
    /// P(a1 != a2) = 0.
    bool equivalent(const RandomVariable &a1, const RandomVariable &a2) const;

   private:
    FiniteProbSpace original_;
    std::vector<std::size_t> kept_;
    FiniteProbSpace reduced_;
};

NullQuotient quotient_null(const FiniteProbSpace &space);

struct Uniqueness {
    bool observables_separated = false;
    bool contexts_separated = false;
};

/// Checks that distinct random variables (the given ones plus point indicators) differ in distribution
/// for some context, and that distinct contexts differ for some indicator variable. Contexts are all
/// positive-measure events when the space has at most 10 points, otherwise singletons and the full space.
Uniqueness uniqueness_check(const FiniteProbSpace &space, const std::vector<RandomVariable> &variables = {});

/// Best CHSH value over all +-1 valued variables on the points of a context, with maximizing variables.
struct ClassicalChsh {
    double value = 0;
    std::array<std::vector<int>, 4> variables;
};

/// Enumerates (A1, A2) over the positive-weight points of the context and picks B1, B2 pointwise,
/// which attains the maximum over all four variables. Throws InputError above 12 support points.
ClassicalChsh classical_chsh_exhaustive(const FiniteProbSpace &space, Event context);

class ClassicalContext final : public ContextState {
   public:
    ClassicalContext(std::shared_ptr<const FiniteProbSpace> space, Event event)
        : space_(std::move(space)), event_(event) {
    }
    Event event() const {
        return event_;
    }
    std::string describe() const override {
        return space_->describe(event_);
    }

   private:
    std::shared_ptr<const FiniteProbSpace> space_;
    Event event_;
};

/// Kolmogorov space as a contextual model: positive-measure events are contexts, random variables are
/// observables, and each variable's instrument is Bayes conditioning on its level sets.
class ClassicalModel final : public ContextualModel {
   public:
    ClassicalModel(FiniteProbSpace space, std::vector<RandomVariable> variables,
                   std::vector<std::pair<std::string, Event>> contexts = {}, Tolerances tolerances = {});

    std::string_view backend() const override {
        return "classical";
    }
    std::vector<std::string> observables() const override;
    std::vector<std::string> instruments() const override {
        return observables();
    }
    const std::vector<Outcome> &outcomes(std::string_view observable) const override;
    const std::string &observable_of(std::string_view instrument) const override;
    Distribution distribution(const Context &context, std::string_view observable) const override;
    std::optional<Context> update(const Context &context, std::string_view instrument,
                                  std::size_t outcome) const override;
    std::vector<NamedContext> named_contexts() const override;
    /// Every positive-measure event when there are at most 10 points, otherwise the named contexts.
    std::vector<Context> default_context_sample(std::uint64_t seed) const override;
    /// Exhaustive maximum over +-1 variables on the whole space; none above 12 positive-weight points.
    std::optional<ChshClassMaximum> chsh_class_maximum(std::uint64_t seed) const override;

    Context make_context(Event e) const;
    const FiniteProbSpace &space() const {
        return *space_;
    }
    const std::vector<RandomVariable> &variables() const {
        return variables_;
    }
    const RandomVariable &variable(std::string_view name) const;
    /// Same model over the null-quotiented space.
    ClassicalModel quotiented() const;

   private:
    std::shared_ptr<const FiniteProbSpace> space_;
    std::vector<RandomVariable> variables_;
    std::vector<std::pair<std::string, Event>> contexts_;
};

}  // namespace cmm

#endif

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
#ifndef CMM_LSR_H
#define CMM_LSR_H

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmm/classical.h"
#include "cmm/contextual_model.h"
#include "cmm/errors.h"

namespace cmm {

/// Real square matrix, row-major, acting on measures by J mu.
using RealMatrix = std::vector<std::vector<double>>;

/// Signed measure on a finite set of points.
class MeasureVector {
   public:
    MeasureVector(std::vector<std::string> labels, std::vector<double> values);
    /// The classical context C as the measure P(. ∩ C) / P(C). Throws ConditioningError for null C.
    static MeasureVector conditioned(const FiniteProbSpace &space, Event context);

    const std::vector<std::string> &labels() const {
        return labels_;
    }
    const std::vector<double> &values() const {
        return values_;
    }
    std::size_t size() const {
        return values_.size();
    }
    double mass() const;
    /// Nonnegative with unit total mass.
    std::vector<InvariantCheck> state_checks(double tol = 1e-12) const;
    bool is_state(double tol = 1e-12) const;

   private:
    std::vector<std::string> labels_;
    std::vector<double> values_;
};

/// Linear functional mu -> sum_i c_i mu_i. An effect when every coefficient lies in [0, 1].
class MEffect {
   public:
    explicit MEffect(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
    }
    const std::vector<double> &coefficients() const {
        return coefficients_;
    }
    bool is_effect(double tol = 1e-12) const;
    double operator()(const MeasureVector &mu) const;

   private:
    std::vector<double> coefficients_;
};

/// Outcome-indexed positive maps J(x) whose sum maps states to states.
class MInstrument {
   public:
    MInstrument(std::vector<RealMatrix> maps, std::vector<Outcome> outcomes, double tol = 1e-12);
    /// Checks for arbitrary data without throwing.
    static std::vector<InvariantCheck> check(const std::vector<RealMatrix> &maps, double tol = 1e-12);

    std::size_t dim() const {
        return maps_.front().size();
    }
    const std::vector<RealMatrix> &maps() const {
        return maps_;
    }
    const std::vector<Outcome> &outcomes() const {
        return outcomes_;
    }
    std::vector<double> apply(std::size_t x, const std::vector<double> &mu) const;

   private:
    std::vector<RealMatrix> maps_;
    std::vector<Outcome> outcomes_;
};

/// J(x) = diag(1{a = x}): conditioning on the level sets of a.
MInstrument conditioning_instrument(const RandomVariable &a);
/// Single-outcome identity map.
MInstrument identity_instrument(std::size_t dim);

struct MApplication {
    double prob = 0;
    std::optional<MeasureVector> updated;
};

MApplication m_instrument_apply(const MInstrument &inst, std::size_t x, const MeasureVector &mu,
                                double eps_cond = 1e-12);

/// A(x) = J(x)^T u. Throws InputError when the effects do not sum to u.
std::vector<MEffect> m_povm_from_instrument(const MInstrument &inst, double tol = 1e-12);

class MeasureContext final : public ContextState {
   public:
    explicit MeasureContext(MeasureVector mu) : mu_(std::move(mu)) {
    }
    const MeasureVector &measure() const {
        return mu_;
    }
    std::string describe() const override;

   private:
    MeasureVector mu_;
};

const MeasureVector &measure_of(const Context &context);

/// Ordered-linear-space model on a finite point set: states are probability vectors, instruments
/// are MInstruments and observables are the induced effect families.
class MeasureModel final : public ContextualModel {
   public:
    explicit MeasureModel(std::vector<std::string> labels, Tolerances tolerances = {});
    /// Conditioning instruments for every variable, one context per named event.
    static MeasureModel from_classical(const ClassicalModel &model);

    void add_instrument(const std::string &name, MInstrument inst);
    void add_context(const std::string &name, MeasureVector mu);

    std::string_view backend() const override {
        return "measure_lsr";
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
    /// Named contexts, every point mass and the uniform state.
    std::vector<Context> default_context_sample(std::uint64_t seed) const override;

    const std::vector<std::string> &labels() const {
        return labels_;
    }
    const MInstrument &instrument(std::string_view name) const;
    const std::vector<MEffect> &effects(std::string_view observable) const;

   private:
    struct Entry {
        std::string name;
        MInstrument inst;
        std::vector<MEffect> effects;
    };
    const Entry &entry(std::string_view name) const;

    std::vector<std::string> labels_;
    std::map<std::string, Entry, std::less<>> entries_;
    std::vector<std::pair<std::string, MeasureVector>> contexts_;
};

/// Contexts as points of [0,1]^(O x X) with coordinates P_C(A = x).
struct MackeyEmbedding {
    /// (observable, outcome index) per column.
    std::vector<std::pair<std::string, std::size_t>> coordinates;
    std::vector<std::string> coordinate_labels;
    std::vector<std::string> context_names;
    /// One row per context.
    std::vector<std::vector<double>> vectors;
    bool separated = true;
    /// First pair of contexts with identical vectors.
    std::optional<std::pair<std::size_t, std::size_t>> collision;
    /// Largest deviation of an observable block sum from 1.
    double block_residual = 0;

    std::size_t column(std::string_view observable, std::size_t outcome) const;
};

MackeyEmbedding mackey_embed(const ContextualModel &model, const std::vector<NamedContext> &contexts,
                             const std::vector<std::string> &observables);

/// Coordinate (A, x) of a context vector. Throws LookupError for an unknown coordinate.
double effect_eval(const MackeyEmbedding &embedding, std::string_view observable, std::size_t outcome,
                   const std::vector<double> &context_vector);

/// Sum of the (A, x) coordinates over x.
double unit_functional(const MackeyEmbedding &embedding, std::string_view observable,
                       const std::vector<double> &context_vector);

/// p v1 + (1 - p) v2.
std::vector<double> mixture(double p, const std::vector<double> &v1, const std::vector<double> &v2);

}  // namespace cmm

#endif

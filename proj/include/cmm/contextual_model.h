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
#ifndef CMM_CONTEXTUAL_MODEL_H
#define CMM_CONTEXTUAL_MODEL_H

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmm/tolerances.h"

namespace cmm {

/// One point of an observable's finite range. value is NaN for purely symbolic outcomes.
struct Outcome {
    std::string label;
    double value;

    bool numeric() const;
};

/// Probabilities indexed like the observable's outcome list.
using Distribution = std::vector<double>;

/// Backend-specific representation of a pre-measurement context.
class ContextState {
   public:
    virtual ~ContextState() = default;
    /// Short human-readable rendering, used in witnesses.
    virtual std::string describe() const = 0;
};

using Context = std::shared_ptr<const ContextState>;

struct NamedContext {
    std::string name;
    Context context;
};

/// Best CHSH value a backend can certify for its model class, with a printable witness.
struct ChshClassMaximum {
    double value;
    std::string witness;
};

/// A contextual measurement model: contexts, observables with finite ranges, instruments that update
/// contexts, and the map (context, observable) -> outcome distribution.
///
/// Observables and instruments are addressed by name. Each instrument measures exactly one observable.
class ContextualModel {
   public:
    explicit ContextualModel(Tolerances tolerances = {}) : tolerances_(tolerances) {
    }
    virtual ~ContextualModel() = default;

    /// "classical", "von_neumann", "instrument" or "measure_lsr".
    virtual std::string_view backend() const = 0;

    virtual std::vector<std::string> observables() const = 0;
    virtual std::vector<std::string> instruments() const = 0;
    virtual const std::vector<Outcome> &outcomes(std::string_view observable) const = 0;
    virtual const std::string &observable_of(std::string_view instrument) const = 0;

    /// P_C^A. Throws LookupError for unknown observables.
    virtual Distribution distribution(const Context &context, std::string_view observable) const = 0;

    /// T_A(x)C, or nullopt when P_C(A = x) <= eps_cond.
    virtual std::optional<Context> update(const Context &context, std::string_view instrument,
                                          std::size_t outcome) const = 0;

    virtual std::vector<NamedContext> named_contexts() const = 0;

    /// Contexts the feature report scans when the caller gives none.
    virtual std::vector<Context> default_context_sample(std::uint64_t seed) const;

    /// Backends with a dedicated CHSH search override this.
    virtual std::optional<ChshClassMaximum> chsh_class_maximum(std::uint64_t seed) const;

    Context context(std::string_view name) const;
    std::size_t outcome_index(std::string_view observable, std::string_view label) const;
    const std::vector<Outcome> &instrument_outcomes(std::string_view instrument) const {
        return outcomes(observable_of(instrument));
    }

    const Tolerances &tolerances() const {
        return tolerances_;
    }
    void set_tolerances(const Tolerances &t) {
        tolerances_ = t;
    }

   private:
    Tolerances tolerances_;
};

}  // namespace cmm

#endif

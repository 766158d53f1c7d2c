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
#include "cmm/contextual_model.h"

#include <cmath>

#include "cmm/errors.h"

namespace cmm {

bool Outcome::numeric() const {
    return !std::isnan(value);
}

std::vector<Context> ContextualModel::default_context_sample(std::uint64_t) const {
    std::vector<Context> out;
    for (auto &nc : named_contexts()) {
        out.push_back(nc.context);
    }
    return out;
}

std::optional<ChshClassMaximum> ContextualModel::chsh_class_maximum(std::uint64_t) const {
    return std::nullopt;
}

Context ContextualModel::context(std::string_view name) const {
    for (auto &nc : named_contexts()) {
        if (nc.name == name) {
            return nc.context;
        }
    }
    throw LookupError("unknown context '" + std::string(name) + "'");
}

std::size_t ContextualModel::outcome_index(std::string_view observable, std::string_view label) const {
    const auto &outs = outcomes(observable);
    for (std::size_t k = 0; k < outs.size(); ++k) {
        if (outs[k].label == label) {
            return k;
        }
    }
    throw LookupError("observable '" + std::string(observable) + "' has no outcome '" + std::string(label) + "'");
}

}  // namespace cmm

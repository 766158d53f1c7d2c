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
#ifndef CMM_FEATURE_REPORT_H
#define CMM_FEATURE_REPORT_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmm/contextual_model.h"

namespace cmm {

/// A concrete (context, instruments, outcomes) configuration backing a table entry.
struct FeatureWitness {
    std::size_t context_index = 0;
    std::string context;
    std::string instrument_a;
    std::string instrument_b;
    std::string outcome_x;
    std::string outcome_y;
    double margin = 0;

    bool operator==(const FeatureWitness &) const = default;
};

struct DiagnosticsReport {
    std::string backend;
    std::size_t contexts = 0;
    std::size_t instruments = 0;

    bool ftp_violated = false;
    double max_delta = 0;
    std::optional<FeatureWitness> ftp_witness;

    bool order_effect = false;
    std::optional<FeatureWitness> order_effect_witness;

    bool replicability = true;
    /// First failing (context, instrument) when replicability does not hold.
    std::optional<FeatureWitness> replicability_counterexample;

    bool rre = true;
    std::optional<FeatureWitness> rre_counterexample;

    bool oe_and_rre = false;
    std::optional<FeatureWitness> oe_and_rre_witness;

    double chsh_max = 0;
    bool bell_violated = false;
    std::string chsh_witness;
    /// "class maximizer" or "sample".
    std::string chsh_source;
    /// Set for sample-based maxima: the context and the instruments A1, A2, B1, B2.
    std::optional<std::size_t> chsh_context_index;
    std::vector<std::string> chsh_instruments;

    bool operator==(const DiagnosticsReport &) const = default;
};

/// Evaluates the feature table over the given contexts and instruments. An empty instrument list
/// means all instruments of the model.
DiagnosticsReport feature_report(const ContextualModel &model, const std::vector<Context> &contexts,
                                 std::vector<std::string> instruments, std::uint64_t seed);

/// Re-evaluates every witness and counterexample against the core diagnostics.
bool verify_witnesses(const ContextualModel &model, const std::vector<Context> &contexts,
                      const DiagnosticsReport &report);

std::string to_text(const DiagnosticsReport &report);

}  // namespace cmm

#endif

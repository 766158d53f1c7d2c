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
#ifndef CMM_SAMPLER_H
#define CMM_SAMPLER_H

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmm/contextual_model.h"
#include "cmm/diagnostics.h"

namespace cmm {

/// Outcome indices of N repeated measurements of one instrument in a fixed context.
struct OutcomeSequence {
    std::string context;
    std::string instrument;
    std::vector<std::size_t> outcomes;
    std::uint64_t seed = 0;
};

struct FrequencyEstimate {
    std::vector<std::size_t> counts;
    std::vector<double> nu;
};

/// Inverse CDF over p in declared order: the first index whose cumulative sum exceeds u. Falls back to the
/// last positive entry when rounding leaves the total below u.
std::size_t categorical(std::span<const double> p, double u);

/// Trial i uses uniform draw i of the stream keyed by seed.
OutcomeSequence sample(const ContextualModel &model, const Context &context, std::string_view instrument,
                       std::size_t n, std::uint64_t seed, std::string context_name = {});

FrequencyEstimate estimate(std::span<const std::size_t> outcomes, std::size_t outcome_count);
FrequencyEstimate estimate(const ContextualModel &model, const OutcomeSequence &seq);

/// Trials of "measure A, update, measure B", each restarting from the same context.
struct PairedSequence {
    std::string context;
    std::string instrument_a;
    std::string instrument_b;
    std::vector<std::pair<std::size_t, std::size_t>> trials;
    /// Set when the drawn A outcome could not be conditioned on; such trials carry no B outcome.
    std::vector<bool> failed;
    std::uint64_t seed = 0;
};

/// Trial j draws x from uniform 2j and y from uniform 2j + 1.
PairedSequence sample_sequential(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                                 std::string_view instrument_b, std::size_t n, std::uint64_t seed,
                                 std::string context_name = {});

/// Empirical joint frequencies over the successful trials.
JointDistribution pair_frequencies(const PairedSequence &z, std::size_t na, std::size_t nb);

struct Combinability {
    bool marginals_match = true;
    double max_residual = 0;
    double threshold = 0;
    /// Stand-alone frequency minus the joint marginal, per outcome.
    std::vector<double> residual_a;
    std::vector<double> residual_b;
};

/// Compares the marginals of z with stand-alone runs of A and B. The match threshold is 3 / sqrt(N).
Combinability combinability_check(const PairedSequence &z, const OutcomeSequence &single_a,
                                  const OutcomeSequence &single_b, std::size_t na, std::size_t nb);

/// Paired run on stream split(0) of seed and stand-alone runs on split(1) and split(2).
Combinability combinability_run(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                                std::string_view instrument_b, std::size_t n, std::uint64_t seed);

/// trial,outcome rows with outcome labels.
std::string to_csv(const ContextualModel &model, const OutcomeSequence &seq);
/// trial,outcome,outcome2 rows; failed trials leave outcome2 empty.
std::string to_csv(const ContextualModel &model, const PairedSequence &z);

}  // namespace cmm

#endif

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
#include "cmm/sampler.h"

#include <algorithm>
#include <cmath>

#include "cmm/errors.h"
#include "cmm/rng.h"

namespace cmm {

std::size_t categorical(std::span<const double> p, double u) {
    if (p.empty()) {
        throw InputError("categorical: empty distribution");
    }
    double cumulative = 0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] > 0) {
            last_positive = k;
        }
        cumulative += p[k];
        if (u < cumulative) {
            return k;
        }
    }
    return last_positive;
}

OutcomeSequence sample(const ContextualModel &model, const Context &context, std::string_view instrument,
                       std::size_t n, std::uint64_t seed, std::string context_name) {
    if (n == 0) {
        throw InputError("sample: N must be at least 1");
    }
    Distribution p = prob_dist(model, context, model.observable_of(instrument));
    OutcomeSequence seq{std::move(context_name), std::string(instrument), {}, seed};
    seq.outcomes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        seq.outcomes.push_back(categorical(p, CounterRng::uniform_at(seed, i)));
    }
    return seq;
}

FrequencyEstimate estimate(std::span<const std::size_t> outcomes, std::size_t outcome_count) {
    if (outcomes.empty()) {
        throw InputError("estimate: empty sequence");
    }
    FrequencyEstimate e{std::vector<std::size_t>(outcome_count, 0), {}};
    for (auto x : outcomes) {
        if (x >= outcome_count) {
            throw LookupError("estimate: outcome index " + std::to_string(x) + " out of range");
        }
        ++e.counts[x];
    }
    for (auto c : e.counts) {
        e.nu.push_back(static_cast<double>(c) / static_cast<double>(outcomes.size()));
    }
    return e;
}

FrequencyEstimate estimate(const ContextualModel &model, const OutcomeSequence &seq) {
    return estimate(seq.outcomes, model.instrument_outcomes(seq.instrument).size());
}

PairedSequence sample_sequential(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                                 std::string_view instrument_b, std::size_t n, std::uint64_t seed,
                                 std::string context_name) {
    if (n == 0) {
        throw InputError("sample_sequential: N must be at least 1");
    }
    Distribution p_a = prob_dist(model, context, model.observable_of(instrument_a));
    const std::string &obs_b = model.observable_of(instrument_b);
    std::vector<std::optional<Distribution>> p_b(p_a.size());
    for (std::size_t x = 0; x < p_a.size(); ++x) {
        if (p_a[x] <= 0) {
            continue;
        }
        if (auto updated = model.update(context, instrument_a, x)) {
            p_b[x] = prob_dist(model, *updated, obs_b);
        }
    }
    PairedSequence z{std::move(context_name), std::string(instrument_a), std::string(instrument_b), {}, {}, seed};
    z.trials.reserve(n);
    z.failed.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t x = categorical(p_a, CounterRng::uniform_at(seed, 2 * j));
        if (!p_b[x]) {
            z.trials.emplace_back(x, 0);
            z.failed.push_back(true);
            continue;
        }
        std::size_t y = categorical(*p_b[x], CounterRng::uniform_at(seed, 2 * j + 1));
        z.trials.emplace_back(x, y);
        z.failed.push_back(false);
    }
    return z;
}

JointDistribution pair_frequencies(const PairedSequence &z, std::size_t na, std::size_t nb) {
    JointDistribution j;
    j.rows = na;
    j.cols = nb;
    j.p.assign(na * nb, 0.0);
    std::size_t ok = 0;
    for (std::size_t t = 0; t < z.trials.size(); ++t) {
        if (z.failed[t]) {
            continue;
        }
        auto [x, y] = z.trials[t];
        if (x >= na || y >= nb) {
            throw LookupError("pair_frequencies: outcome index out of range");
        }
        j.p[x * nb + y] += 1.0;
        ++ok;
    }
    if (ok == 0) {
        throw InputError("pair_frequencies: no successful trials");
    }
    for (double &v : j.p) {
        v /= static_cast<double>(ok);
    }
    return j;
}

Combinability combinability_check(const PairedSequence &z, const OutcomeSequence &single_a,
                                  const OutcomeSequence &single_b, std::size_t na, std::size_t nb) {
    if (z.trials.empty()) {
        throw InputError("combinability_check: empty paired sequence");
    }
    JointDistribution joint = pair_frequencies(z, na, nb);
    FrequencyEstimate fa = estimate(single_a.outcomes, na);
    FrequencyEstimate fb = estimate(single_b.outcomes, nb);
    Combinability c;
    c.threshold = 3.0 * std::sqrt(0.25 / static_cast<double>(z.trials.size())) * 2.0;
    auto ja = joint.row_marginal();
    auto jb = joint.col_marginal();
    for (std::size_t x = 0; x < na; ++x) {
        c.residual_a.push_back(fa.nu[x] - ja[x]);
        c.max_residual = std::max(c.max_residual, std::abs(c.residual_a.back()));
    }
    for (std::size_t y = 0; y < nb; ++y) {
        c.residual_b.push_back(fb.nu[y] - jb[y]);
        c.max_residual = std::max(c.max_residual, std::abs(c.residual_b.back()));
    }
    c.marginals_match = c.max_residual < c.threshold;
    return c;
}

Combinability combinability_run(const ContextualModel &model, const Context &context, std::string_view instrument_a,
                                std::string_view instrument_b, std::size_t n, std::uint64_t seed) {
    const CounterRng root(seed);
    PairedSequence z = sample_sequential(model, context, instrument_a, instrument_b, n, root.split(0).key());
    OutcomeSequence a = sample(model, context, instrument_a, n, root.split(1).key());
    OutcomeSequence b = sample(model, context, instrument_b, n, root.split(2).key());
    return combinability_check(z, a, b, model.instrument_outcomes(instrument_a).size(),
                               model.instrument_outcomes(instrument_b).size());
}

std::string to_csv(const ContextualModel &model, const OutcomeSequence &seq) {
    const auto &outs = model.instrument_outcomes(seq.instrument);
    std::string s = "trial,outcome\n";
    for (std::size_t i = 0; i < seq.outcomes.size(); ++i) {
        s += std::to_string(i) + "," + outs[seq.outcomes[i]].label + "\n";
    }
    return s;
}

std::string to_csv(const ContextualModel &model, const PairedSequence &z) {
    const auto &oa = model.instrument_outcomes(z.instrument_a);
    const auto &ob = model.instrument_outcomes(z.instrument_b);
    std::string s = "trial,outcome,outcome2\n";
    for (std::size_t i = 0; i < z.trials.size(); ++i) {
        s += std::to_string(i) + "," + oa[z.trials[i].first].label + "," +
             (z.failed[i] ? std::string() : ob[z.trials[i].second].label) + "\n";
    }
    return s;
}

}  // namespace cmm

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
#include "cmm/report.h"

#include "cmm/errors.h"

namespace cmm {

using nlohmann::json;

namespace {

template <typename T>
json opt(const std::optional<T> &v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> opt_from(const json &j, const char *key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return std::nullopt;
    }
    return it->get<T>();
}

json witness_json(const std::optional<FeatureWitness> &w) {
    if (!w) {
        return nullptr;
    }
    return {{"context_index", w->context_index}, {"context", w->context},     {"instrument_a", w->instrument_a},
            {"instrument_b", w->instrument_b},   {"outcome_x", w->outcome_x}, {"outcome_y", w->outcome_y},
            {"margin", w->margin}};
}

std::optional<FeatureWitness> witness_from(const json &j, const char *key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return std::nullopt;
    }
    const json &w = *it;
    return FeatureWitness{w.at("context_index").get<std::size_t>(), w.at("context").get<std::string>(),
                          w.at("instrument_a").get<std::string>(),  w.at("instrument_b").get<std::string>(),
                          w.at("outcome_x").get<std::string>(),     w.at("outcome_y").get<std::string>(),
                          w.at("margin").get<double>()};
}

InterferenceRegime regime_from(const std::string &s) {
    for (auto r : {InterferenceRegime::trigonometric, InterferenceRegime::hyperbolic, InterferenceRegime::degenerate}) {
        if (to_string(r) == s) {
            return r;
        }
    }
    throw InputError("unknown interference regime '" + s + "'");
}

template <typename F>
auto parsing(const char *what, F &&f) {
    try {
        return f();
    } catch (const json::exception &e) {
        throw InputError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

json to_json(const ReportRecord &r) {
    return {{"model_digest", r.model_digest}, {"command", r.command},           {"inputs", r.inputs},
            {"outputs", r.outputs},           {"tool_version", r.tool_version}, {"seed", opt(r.seed)}};
}

ReportRecord record_from_json(const json &j) {
    return parsing("report record", [&] {
        ReportRecord r;
        r.model_digest = j.at("model_digest").get<std::string>();
        r.command = j.at("command").get<std::string>();
        r.inputs = j.at("inputs");
        r.outputs = j.at("outputs");
        r.tool_version = j.at("tool_version").get<std::string>();
        r.seed = opt_from<std::uint64_t>(j, "seed");
        return r;
    });
}

json to_json(const DiagnosticsReport &r) {
    return {{"backend", r.backend},
            {"contexts", r.contexts},
            {"instruments", r.instruments},
            {"ftp_violated", r.ftp_violated},
            {"max_delta", r.max_delta},
            {"ftp_witness", witness_json(r.ftp_witness)},
            {"order_effect", r.order_effect},
            {"order_effect_witness", witness_json(r.order_effect_witness)},
            {"replicability", r.replicability},
            {"replicability_counterexample", witness_json(r.replicability_counterexample)},
            {"rre", r.rre},
            {"rre_counterexample", witness_json(r.rre_counterexample)},
            {"oe_and_rre", r.oe_and_rre},
            {"oe_and_rre_witness", witness_json(r.oe_and_rre_witness)},
            {"chsh_max", r.chsh_max},
            {"bell_violated", r.bell_violated},
            {"chsh_witness", r.chsh_witness},
            {"chsh_source", r.chsh_source},
            {"chsh_context_index", opt(r.chsh_context_index)},
            {"chsh_instruments", r.chsh_instruments}};
}

DiagnosticsReport diagnostics_from_json(const json &j) {
    return parsing("diagnostics report", [&] {
        DiagnosticsReport r;
        r.backend = j.at("backend").get<std::string>();
        r.contexts = j.at("contexts").get<std::size_t>();
        r.instruments = j.at("instruments").get<std::size_t>();
        r.ftp_violated = j.at("ftp_violated").get<bool>();
        r.max_delta = j.at("max_delta").get<double>();
        r.ftp_witness = witness_from(j, "ftp_witness");
        r.order_effect = j.at("order_effect").get<bool>();
        r.order_effect_witness = witness_from(j, "order_effect_witness");
        r.replicability = j.at("replicability").get<bool>();
        r.replicability_counterexample = witness_from(j, "replicability_counterexample");
        r.rre = j.at("rre").get<bool>();
        r.rre_counterexample = witness_from(j, "rre_counterexample");
        r.oe_and_rre = j.at("oe_and_rre").get<bool>();
        r.oe_and_rre_witness = witness_from(j, "oe_and_rre_witness");
        r.chsh_max = j.at("chsh_max").get<double>();
        r.bell_violated = j.at("bell_violated").get<bool>();
        r.chsh_witness = j.at("chsh_witness").get<std::string>();
        r.chsh_source = j.at("chsh_source").get<std::string>();
        r.chsh_context_index = opt_from<std::size_t>(j, "chsh_context_index");
        r.chsh_instruments = j.at("chsh_instruments").get<std::vector<std::string>>();
        return r;
    });
}

json to_json(const InterferenceDatum &d) {
    return {{"delta", d.delta},
            {"p_b", d.p_b},
            {"classical_sum", d.classical_sum},
            {"lambda", opt(d.lambda)},
            {"regime", std::string(to_string(d.regime))},
            {"theta", opt(d.theta)},
            {"sign", d.sign}};
}

InterferenceDatum interference_from_json(const json &j) {
    return parsing("interference datum", [&] {
        InterferenceDatum d;
        d.delta = j.at("delta").get<double>();
        d.p_b = j.at("p_b").get<double>();
        d.classical_sum = j.at("classical_sum").get<double>();
        d.lambda = opt_from<double>(j, "lambda");
        d.regime = regime_from(j.at("regime").get<std::string>());
        d.theta = opt_from<double>(j, "theta");
        d.sign = j.at("sign").get<int>();
        return d;
    });
}

json to_json(const ValidationReport &r) {
    json checks = json::array();
    for (const auto &c : r.checks) {
        checks.push_back({{"invariant", c.name}, {"passed", c.passed}, {"residual", c.residual}});
    }
    return {{"kind", r.kind}, {"ok", r.ok()}, {"checks", checks}};
}

json to_json(const ChshEvaluation &c) {
    return {{"value", c.value},
            {"correlations", {{c.correlations[0][0], c.correlations[0][1]}, {c.correlations[1][0], c.correlations[1][1]}}},
            {"sequential", c.sequential}};
}

json to_json(const FrequencyEstimate &e) {
    return {{"counts", e.counts}, {"nu", e.nu}};
}

json to_json(const JointDistribution &d) {
    return {{"rows", d.rows}, {"cols", d.cols}, {"p", d.p}};
}

json to_json(const Combinability &c) {
    return {{"marginals_match", c.marginals_match},
            {"max_residual", c.max_residual},
            {"threshold", c.threshold},
            {"residual_a", c.residual_a},
            {"residual_b", c.residual_b}};
}

json to_json(const MackeyEmbedding &e) {
    json collision = nullptr;
    if (e.collision) {
        collision = {e.collision->first, e.collision->second};
    }
    return {{"columns", e.coordinate_labels},
            {"rows", e.context_names},
            {"matrix", e.vectors},
            {"separated", e.separated},
            {"collision", collision},
            {"block_residual", e.block_residual}};
}

json to_json(const Tolerances &t) {
    return {{"eps_cond", t.eps_cond},
            {"eps_oe", t.eps_oe},
            {"eps_dep", t.eps_dep},
            {"eps_epr", t.eps_epr},
            {"eps_identity", t.eps_identity},
            {"cluster", t.cluster},
            {"hermitian", t.hermitian},
            {"operator_identity", t.operator_identity},
            {"state", t.state},
            {"weights", t.weights},
            {"lambda_slack", t.lambda_slack}};
}

}  // namespace cmm

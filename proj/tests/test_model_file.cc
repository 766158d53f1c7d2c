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
#include <gtest/gtest.h>

#include <algorithm>

#include "cmm/diagnostics.h"
#include "cmm/errors.h"
#include "cmm/feature_report.h"
#include "cmm/model_file.h"
#include "cmm/report.h"

namespace cmm {
namespace {

using nlohmann::json;

json fixture(const std::string &name) {
    return read_model_file(std::string(CMM_FIXTURE_DIR) + "/" + name + ".json");
}

const InvariantCheck *find_check(const ValidationReport &r, const std::string &name) {
    auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const auto &c) { return c.name == name; });
    return it == r.checks.end() ? nullptr : &*it;
}

TEST(ModelFile, FixturesLoadWithExpectedBackends) {
    const std::pair<const char *, const char *> cases[] = {
        {"classical", "classical"},          {"fair_coin", "classical"},
        {"qubit_von_neumann", "von_neumann"}, {"singlet", "von_neumann"},
        {"two_qubit_product", "von_neumann"}, {"instrument_oe_rre", "instrument"},
        {"measure_lsr", "measure_lsr"},
    };
    for (const auto &[file, backend] : cases) {
        auto loaded = load_model(fixture(file));
        EXPECT_EQ(loaded.model->backend(), backend) << file;
        EXPECT_EQ(loaded.digest.size(), 16u);
        EXPECT_TRUE(validate_model(fixture(file)).ok()) << file;
    }
}

TEST(ModelFile, TraceFailureNamesInvariant) {
    auto rep = validate_model(fixture("invalid_trace"));
    EXPECT_FALSE(rep.ok());
    const auto *c = find_check(rep, "context 'rho': trace=1");
    ASSERT_NE(c, nullptr);
    EXPECT_FALSE(c->passed);
    EXPECT_NEAR(c->residual, 0.1, 1e-12);
    try {
        load_model(fixture("invalid_trace"));
        FAIL() << "expected a validation failure";
    } catch (const ValidationFailure &e) {
        ASSERT_EQ(e.failed.size(), 1u);
        EXPECT_EQ(e.failed[0].name, "context 'rho': trace=1");
    }
}

TEST(ModelFile, NegativeWeightNamesPoint) {
    auto rep = validate_model(fixture("invalid_negative_weight"));
    const auto *c = find_check(rep, "weight of point 'p3' nonnegative");
    ASSERT_NE(c, nullptr);
    EXPECT_FALSE(c->passed);
    EXPECT_NEAR(c->residual, 0.2, 1e-12);
}

TEST(ModelFile, ParseErrorsCarryPaths) {
    EXPECT_THROW(parse_model_text("{ not json"), ModelFileError);
    EXPECT_THROW(read_model_file("/nonexistent/model.json"), ModelFileError);
    try {
        load_model(json::parse(R"({"kind": "von_neumann", "dim": 2, "observables": [{"matrix": [[1,0],[0,1]]}]})"));
        FAIL() << "expected a model file error";
    } catch (const ModelFileError &e) {
        std::string what = e.what();
        EXPECT_NE(what.find("observables[0]"), std::string::npos) << what;
        EXPECT_NE(what.find("name"), std::string::npos) << what;
    }
    EXPECT_THROW(load_model(json::parse(R"({"kind": "banana"})")), ModelFileError);
}

TEST(ModelFile, ComplexEntriesAndLabels) {
    auto doc = json::parse(R"({
        "kind": "von_neumann", "dim": 2,
        "observables": [{"name": "Y", "matrix": [[0, [0, -1]], [[0, 1], 0]], "labels": ["up", "down"]}],
        "contexts": [{"name": "i", "state": [0.7071067811865475, [0, 0.7071067811865475]]}]
    })");
    auto loaded = load_model(doc);
    const auto &m = *loaded.model;
    auto p = prob_dist(m, m.context("i"), "Y");
    EXPECT_NEAR(p[0], 1.0, 1e-12);
    EXPECT_EQ(m.outcomes("Y")[0].label, "up");
}

TEST(ModelFile, DigestIsStableAndSensitive) {
    auto a = fixture("qubit_von_neumann");
    EXPECT_EQ(model_digest(a), model_digest(fixture("qubit_von_neumann")));
    a["dim"] = 3;
    EXPECT_NE(model_digest(a), model_digest(fixture("qubit_von_neumann")));
}

TEST(ModelFile, ToleranceOverrides) {
    EXPECT_EQ(parse_tolerance_override("eps_oe=1e-6"), (std::pair<std::string, double>{"eps_oe", 1e-6}));
    EXPECT_THROW(parse_tolerance_override("eps_oe"), InputError);
    EXPECT_THROW(parse_tolerance_override("nope=1"), InputError);
    EXPECT_THROW(parse_tolerance_override("eps_oe=-1"), InputError);
    auto loose = validate_model(fixture("invalid_trace"), {{"state", 0.2}});
    EXPECT_TRUE(loose.ok());
    auto loaded = load_model(fixture("qubit_von_neumann"), {{"eps_oe", 0.3}});
    EXPECT_EQ(loaded.tolerances.eps_oe, 0.3);
    EXPECT_EQ(loaded.model->tolerances().eps_oe, 0.3);
}

TEST(Report, RecordRoundTrip) {
    ReportRecord r;
    r.model_digest = "0123456789abcdef";
    r.command = "chsh";
    r.inputs = {{"context", "singlet"}, {"restarts", 8}};
    r.outputs = {{"value", 2.8284271247461903}};
    r.seed = 18446744073709551615ull;
    EXPECT_EQ(record_from_json(to_json(r)), r);
    EXPECT_EQ(record_from_json(json::parse(to_json(r).dump())), r);
    r.seed.reset();
    EXPECT_EQ(record_from_json(json::parse(to_json(r).dump())), r);
}

TEST(Report, DiagnosticsRoundTrip) {
    auto loaded = load_model(fixture("qubit_von_neumann"));
    const auto &m = *loaded.model;
    auto contexts = m.default_context_sample(5);
    auto rep = feature_report(m, contexts, m.instruments(), 5);
    auto back = diagnostics_from_json(json::parse(to_json(rep).dump()));
    EXPECT_EQ(back, rep);
}

TEST(Report, InterferenceRoundTrip) {
    auto loaded = load_model(fixture("qubit_von_neumann"));
    const auto &m = *loaded.model;
    for (const char *ctx : {"zero", "plus", "mixed"}) {
        auto d = ftp_interference(m, m.context(ctx), "X", "Z", 0);
        EXPECT_EQ(interference_from_json(json::parse(to_json(d).dump())), d) << ctx;
    }
}

}  // namespace
}  // namespace cmm

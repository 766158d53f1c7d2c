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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cmm/cli.h"
#include "cmm/report.h"

namespace cmm {
namespace {

using nlohmann::json;

std::string fixture(const std::string &name) {
    return std::string(CMM_FIXTURE_DIR) + "/" + name + ".json";
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    auto r = run(args);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return json::parse(r.out);
}

std::vector<std::string> csv_lines(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    return lines;
}

TEST(Cli, ValidateExitCodes) {
    auto ok = run({"validate", "--model", fixture("singlet")});
    EXPECT_EQ(ok.code, kExitOk) << ok.err;
    auto trace = run({"validate", "--model", fixture("invalid_trace")});
    EXPECT_EQ(trace.code, kExitValidation);
    EXPECT_NE(trace.out.find("FAIL  context 'rho': trace=1  residual 1.000e-01"), std::string::npos) << trace.out;
    auto weight = run({"validate", "--model", fixture("invalid_negative_weight")});
    EXPECT_EQ(weight.code, kExitValidation);
    EXPECT_NE(weight.out.find("'p3'"), std::string::npos);
    EXPECT_EQ(run({"validate", "--model", "/nonexistent.json"}).code, kExitValidation);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(run({"validate"}).code, kExitUsage);
    EXPECT_EQ(run({"validate", "--model", fixture("singlet"), "--format", "xml"}).code, kExitUsage);
    EXPECT_EQ(run({"validate", "--model", fixture("singlet"), "--tol", "bogus=1"}).code, kExitUsage);
}

TEST(Cli, RandomizedCommandsRequireSeed) {
    auto d = run({"diagnose", "--model", fixture("classical")});
    EXPECT_EQ(d.code, kExitUsage);
    EXPECT_NE(d.err.find("--seed"), std::string::npos);
    EXPECT_EQ(run({"chsh", "--model", fixture("singlet")}).code, kExitUsage);
    EXPECT_EQ(run({"sample", "--model", fixture("fair_coin"), "--context", "omega", "--A", "coin"}).code, kExitUsage);
}

TEST(Cli, DiagnoseClassicalTable) {
    auto j = run_json({"diagnose", "--model", fixture("classical"), "--seed", "1"});
    const auto &o = j["outputs"];
    EXPECT_FALSE(o["ftp_violated"].get<bool>());
    EXPECT_FALSE(o["order_effect"].get<bool>());
    EXPECT_TRUE(o["replicability"].get<bool>());
    EXPECT_TRUE(o["rre"].get<bool>());
    EXPECT_FALSE(o["bell_violated"].get<bool>());
    EXPECT_NEAR(o["chsh_max"].get<double>(), 2.0, 1e-12);
}

TEST(Cli, DiagnoseQubitTable) {
    auto j = run_json({"diagnose", "--model", fixture("qubit_von_neumann"), "--seed", "1"});
    const auto &o = j["outputs"];
    EXPECT_TRUE(o["ftp_violated"].get<bool>());
    EXPECT_TRUE(o["order_effect"].get<bool>());
    EXPECT_TRUE(o["replicability"].get<bool>());
    EXPECT_FALSE(o["rre"].get<bool>());
    EXPECT_FALSE(o["oe_and_rre"].get<bool>());
    EXPECT_TRUE(o["bell_violated"].get<bool>());
    EXPECT_EQ(j["seed"].get<std::uint64_t>(), 1u);
    EXPECT_EQ(j["tool_version"].get<std::string>(), std::string(kToolVersion));
}

TEST(Cli, DiagnoseInstrumentFixtureShowsOeAndRre) {
    auto j = run_json({"diagnose", "--model", fixture("instrument_oe_rre"), "--seed", "2"});
    EXPECT_TRUE(j["outputs"]["oe_and_rre"].get<bool>());
    EXPECT_EQ(j["outputs"]["backend"].get<std::string>(), "instrument");
}

TEST(Cli, DiagnoseIsDeterministicAndRoundTrips) {
    std::vector<std::string> args = {"diagnose", "--model", fixture("qubit_von_neumann"), "--seed", "9"};
    auto a = run_json(args), b = run_json(args);
    EXPECT_EQ(a.dump(), b.dump());
    auto rec = record_from_json(a);
    EXPECT_EQ(to_json(rec), a);
    EXPECT_EQ(diagnostics_from_json(rec.outputs), diagnostics_from_json(a["outputs"]));
}

TEST(Cli, InterferenceSweep) {
    auto r = run({"interference", "--model", fixture("qubit_von_neumann"), "--A", "X", "--B", "Z", "--y", "+1",
                  "--sweep", "4", "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto lines = csv_lines(r.out);
    ASSERT_EQ(lines.size(), 6u);
    EXPECT_EQ(lines[0], "t,y,delta,delta_cross,lambda,theta,regime");
    EXPECT_EQ(lines[1].rfind("0,+1,0.5,0.5,", 0), 0u) << lines[1];
    // Second row is t = pi/4, the |+> eigenstate of X.
    std::istringstream row(lines[2]);
    std::string t, y, delta, cross;
    std::getline(row, t, ',');
    std::getline(row, y, ',');
    std::getline(row, delta, ',');
    std::getline(row, cross, ',');
    EXPECT_NEAR(std::stod(t), std::numbers::pi / 4, 1e-9);
    EXPECT_NEAR(std::stod(delta), 0.0, 1e-12);
    EXPECT_NEAR(std::stod(cross), 0.0, 1e-12);
}

TEST(Cli, InterferenceClassicalIsZero) {
    auto r = run({"interference", "--model", fixture("classical"), "--A", "a", "--B", "b", "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto lines = csv_lines(r.out);
    ASSERT_GT(lines.size(), 1u);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        std::string ctx, y, delta;
        std::getline(row, ctx, ',');
        std::getline(row, y, ',');
        std::getline(row, delta, ',');
        EXPECT_EQ(std::stod(delta), 0.0) << lines[i];
    }
}

TEST(Cli, InterferenceJsonRoundTrip) {
    auto j = run_json({"interference", "--model", fixture("qubit_von_neumann"), "--context", "zero", "--A", "X",
                       "--B", "Z"});
    EXPECT_EQ(to_json(record_from_json(j)), j);
}

TEST(Cli, ChshMaximizeAndEvaluate) {
    auto j = run_json({"chsh", "--model", fixture("singlet"), "--seed", "3"});
    double v = j["outputs"]["value"].get<double>();
    EXPECT_NEAR(v, 2 * std::numbers::sqrt2, 1e-2);
    EXPECT_LE(v, 2 * std::numbers::sqrt2 + 1e-6);
    auto incompatible =
        run({"chsh", "--model", fixture("qubit_von_neumann"), "--seed", "1", "--context", "zero", "--instruments",
             "X,Z,Z,X"});
    EXPECT_EQ(incompatible.code, kExitPrecondition);
    auto forced = run({"chsh", "--model", fixture("qubit_von_neumann"), "--seed", "1", "--context", "zero",
                       "--instruments", "X,Z,Z,X", "--force"});
    EXPECT_EQ(forced.code, kExitOk) << forced.err;
}

TEST(Cli, Entangle) {
    auto s = run_json({"entangle", "--model", fixture("singlet"), "--context", "singlet", "--A", "A", "--B", "B"});
    EXPECT_NEAR(s["outputs"]["concurrence"].get<double>(), 2.0, 1e-9);
    EXPECT_TRUE(s["outputs"]["epr_complete"].get<bool>());
    EXPECT_TRUE(s["outputs"]["ab_entangled"].get<bool>());
    auto p = run_json(
        {"entangle", "--model", fixture("two_qubit_product"), "--context", "product", "--A", "A", "--B", "B"});
    EXPECT_NEAR(p["outputs"]["concurrence"].get<double>(), 0.0, 1e-12);
    EXPECT_FALSE(p["outputs"]["epr_complete"].get<bool>());
}

TEST(Cli, SampleFairCoin) {
    auto j = run_json(
        {"sample", "--model", fixture("fair_coin"), "--context", "omega", "--A", "coin", "--N", "100000", "--seed", "5"});
    const auto &nu = j["outputs"]["estimate"]["nu"];
    EXPECT_LT(std::abs(nu[0].get<double>() - 0.5), 0.01);
    auto csv = run({"sample", "--model", fixture("fair_coin"), "--context", "omega", "--A", "coin", "--N", "3",
                    "--seed", "5", "--format", "csv"});
    EXPECT_EQ(csv_lines(csv.out).size(), 4u);
    EXPECT_EQ(csv_lines(csv.out)[0], "trial,outcome");
}

TEST(Cli, SampleCombinabilityReproducesDelta) {
    auto j = run_json({"sample", "--model", fixture("qubit_von_neumann"), "--context", "zero", "--A", "X", "--B",
                       "Z", "--N", "100000", "--seed", "5", "--combinability"});
    const auto &c = j["outputs"]["combinability"];
    EXPECT_FALSE(c["marginals_match"].get<bool>());
    EXPECT_NEAR(c["residual_b"][0].get<double>(), 0.5, 0.02);
}

TEST(Cli, OutFileMatchesStdout) {
    auto path = std::filesystem::temp_directory_path() / "cmm_cli_out_test.json";
    std::vector<std::string> args = {"validate", "--model", fixture("classical"), "--format", "json"};
    auto direct = run(args);
    args.push_back("--out");
    args.push_back(path.string());
    auto to_file = run(args);
    ASSERT_EQ(to_file.code, kExitOk) << to_file.err;
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(buf.str(), direct.out);
    std::filesystem::remove(path);
}

TEST(Cli, UnknownNamesAreUsageErrors) {
    EXPECT_EQ(run({"entangle", "--model", fixture("singlet"), "--context", "nope", "--A", "A", "--B", "B"}).code,
              kExitUsage);
}

}  // namespace
}  // namespace cmm

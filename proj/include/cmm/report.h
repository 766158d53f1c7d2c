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
#ifndef CMM_REPORT_H
#define CMM_REPORT_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cmm/diagnostics.h"
#include "cmm/feature_report.h"
#include "cmm/lsr.h"
#include "cmm/model_file.h"
#include "cmm/sampler.h"

namespace cmm {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Machine-readable record of one command run.
struct ReportRecord {
    std::string model_digest;
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
    std::string tool_version = std::string(kToolVersion);
    std::optional<std::uint64_t> seed;

    bool operator==(const ReportRecord &) const = default;
};

nlohmann::json to_json(const ReportRecord &record);
ReportRecord record_from_json(const nlohmann::json &j);

nlohmann::json to_json(const DiagnosticsReport &report);
DiagnosticsReport diagnostics_from_json(const nlohmann::json &j);

nlohmann::json to_json(const InterferenceDatum &datum);
InterferenceDatum interference_from_json(const nlohmann::json &j);

nlohmann::json to_json(const ValidationReport &report);
nlohmann::json to_json(const ChshEvaluation &chsh);
nlohmann::json to_json(const FrequencyEstimate &estimate);
nlohmann::json to_json(const JointDistribution &joint);
nlohmann::json to_json(const Combinability &check);
/// Rows are contexts, columns are (observable, outcome) pairs.
nlohmann::json to_json(const MackeyEmbedding &embedding);
nlohmann::json to_json(const Tolerances &tol);

}  // namespace cmm

#endif

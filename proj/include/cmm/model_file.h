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
#ifndef CMM_MODEL_FILE_H
#define CMM_MODEL_FILE_H

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmm/contextual_model.h"
#include "cmm/errors.h"
#include "cmm/tolerances.h"

namespace cmm {

/// Malformed model file: bad JSON, missing fields or wrong shapes. The message carries the field path.
struct ModelFileError : InputError {
    using InputError::InputError;
};

/// The model file fails one or more invariants.
struct ValidationFailure : Error {
    ValidationFailure(const std::string &message, std::vector<InvariantCheck> failed)
        : Error(message), failed(std::move(failed)) {
    }
    std::vector<InvariantCheck> failed;
};

struct ValidationReport {
    std::string kind;
    std::vector<InvariantCheck> checks;

    bool ok() const;
};

struct LoadedModel {
    std::string kind;
    std::string digest;
    Tolerances tolerances;
    std::unique_ptr<ContextualModel> model;
};

using ToleranceOverrides = std::vector<std::pair<std::string, double>>;

/// Parses JSON text; syntax errors report line and column.
nlohmann::json parse_model_text(const std::string &text);
nlohmann::json read_model_file(const std::string &path);

/// FNV-1a 64 of the compact serialization, as 16 hex digits.
std::string model_digest(const nlohmann::json &doc);

/// Every invariant of every object in the file, with residuals. Throws ModelFileError for structural
/// problems that prevent checking.
ValidationReport validate_model(const nlohmann::json &doc, const ToleranceOverrides &overrides = {});

/// Validates, then builds the backend. Throws ValidationFailure listing the failed invariants.
LoadedModel load_model(const nlohmann::json &doc, const ToleranceOverrides &overrides = {});

/// Parses "key=value".
std::pair<std::string, double> parse_tolerance_override(const std::string &text);

}  // namespace cmm

#endif

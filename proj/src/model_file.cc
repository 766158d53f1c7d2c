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
#include "cmm/model_file.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "cmm/classical.h"
#include "cmm/lsr.h"
#include "cmm/quantum.h"

namespace cmm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &what) {
    throw ModelFileError(path + ": " + what);
}

const json &field(const json &obj, const char *key, const std::string &path) {
    if (!obj.is_object()) {
        fail(path, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(path, std::string("missing field '") + key + "'");
    }
    return *it;
}

const json &array_field(const json &obj, const char *key, const std::string &path) {
    const json &a = field(obj, key, path);
    if (!a.is_array()) {
        fail(path + "." + key, "expected an array");
    }
    return a;
}

std::string as_string(const json &j, const std::string &path) {
    if (!j.is_string()) {
        fail(path, "expected a string");
    }
    return j.get<std::string>();
}

double as_number(const json &j, const std::string &path) {
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    return j.get<double>();
}

Complex as_complex(const json &j, const std::string &path) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    fail(path, "expected a number or [re, im]");
}

std::vector<Complex> as_vector(const json &j, const std::string &path) {
    if (!j.is_array() || j.empty()) {
        fail(path, "expected a nonempty array of complex entries");
    }
    std::vector<Complex> v;
    for (std::size_t k = 0; k < j.size(); ++k) {
        v.push_back(as_complex(j[k], path + "[" + std::to_string(k) + "]"));
    }
    return v;
}

CMatrix as_matrix(const json &j, const std::string &path) {
    if (!j.is_array() || j.empty()) {
        fail(path, "expected a nonempty array of rows");
    }
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    std::vector<Complex> entries;
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = as_vector(j[r], path + "[" + std::to_string(r) + "]");
        if (r == 0) {
            cols = row.size();
        } else if (row.size() != cols) {
            fail(path + "[" + std::to_string(r) + "]", "row length differs from row 0");
        }
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return CMatrix(rows, cols, std::move(entries));
}

CMatrix as_square(const json &j, std::size_t dim, const std::string &path) {
    CMatrix m = as_matrix(j, path);
    if (m.rows() != dim || m.cols() != dim) {
        fail(path, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
    }
    return m;
}

std::vector<CMatrix> as_matrices(const json &obj, const char *key, std::size_t dim, const std::string &path) {
    const json &a = array_field(obj, key, path);
    std::vector<CMatrix> out;
    for (std::size_t k = 0; k < a.size(); ++k) {
        out.push_back(as_square(a[k], dim, path + "." + key + "[" + std::to_string(k) + "]"));
    }
    if (out.empty()) {
        fail(path + "." + key, "expected at least one entry");
    }
    return out;
}

double label_value(const std::string &label) {
    char *end = nullptr;
    double v = std::strtod(label.c_str(), &end);
    if (label.empty() || end != label.c_str() + label.size()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return v;
}

/// Entries are "label" (numeric value read from the label when it parses) or {"label", "value"}.
std::vector<Outcome> as_outcomes(const json &obj, const std::string &path) {
    auto it = obj.find("outcomes");
    if (it == obj.end()) {
        return {};
    }
    if (!it->is_array()) {
        fail(path + ".outcomes", "expected an array");
    }
    std::vector<Outcome> out;
    for (std::size_t k = 0; k < it->size(); ++k) {
        const json &o = (*it)[k];
        const std::string p = path + ".outcomes[" + std::to_string(k) + "]";
        if (o.is_string()) {
            std::string label = o.get<std::string>();
            out.push_back({label, label_value(label)});
        } else {
            std::string label = as_string(field(o, "label", p), p + ".label");
            auto v = o.find("value");
            out.push_back({label, v == o.end() ? label_value(label) : as_number(*v, p + ".value")});
        }
    }
    return out;
}

std::string name_of(const json &obj, const std::string &path, std::set<std::string> &seen) {
    std::string name = as_string(field(obj, "name", path), path + ".name");
    if (!seen.insert(name).second) {
        fail(path + ".name", "duplicate name '" + name + "'");
    }
    return name;
}

void add_prefixed(ValidationReport &rep, const std::string &prefix, const std::vector<InvariantCheck> &checks) {
    for (const auto &c : checks) {
        rep.checks.push_back({prefix + ": " + c.name, c.passed, c.residual});
    }
}

bool all_passed(const std::vector<InvariantCheck> &checks) {
    for (const auto &c : checks) {
        if (!c.passed) {
            return false;
        }
    }
    return true;
}

Tolerances loose() {
    Tolerances t;
    t.operator_identity = INFINITY;
    t.state = INFINITY;
    t.weights = INFINITY;
    return t;
}

Tolerances read_tolerances(const json &doc, const ToleranceOverrides &overrides) {
    Tolerances tol;
    if (auto it = doc.find("tolerances"); it != doc.end()) {
        if (!it->is_object()) {
            fail("tolerances", "expected an object");
        }
        for (const auto &[key, value] : it->items()) {
            if (!tol.set(key, as_number(value, "tolerances." + key))) {
                fail("tolerances." + key, "unknown tolerance");
            }
        }
    }
    for (const auto &[key, value] : overrides) {
        if (!tol.set(key, value)) {
            throw InputError("unknown tolerance '" + key + "'");
        }
    }
    return tol;
}

std::unique_ptr<ContextualModel> assemble_classical(const json &doc, const Tolerances &tol, ValidationReport &rep) {
    const json &w = array_field(doc, "weights", "model");
    std::vector<double> weights;
    for (std::size_t k = 0; k < w.size(); ++k) {
        weights.push_back(as_number(w[k], "weights[" + std::to_string(k) + "]"));
    }
    if (weights.empty() || weights.size() > 64) {
        fail("weights", "expected between 1 and 64 points");
    }
    std::vector<std::string> labels;
    if (auto it = doc.find("points"); it != doc.end()) {
        for (std::size_t k = 0; k < it->size(); ++k) {
            labels.push_back(as_string((*it)[k], "points[" + std::to_string(k) + "]"));
        }
        if (labels.size() != weights.size()) {
            fail("points", "expected one label per weight");
        }
    } else {
        for (std::size_t k = 0; k < weights.size(); ++k) {
            labels.push_back(std::to_string(k + 1));
        }
    }
    double sum = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        double neg = std::max(0.0, -weights[k]);
        rep.checks.push_back({"weight of point '" + labels[k] + "' nonnegative", neg == 0.0, neg});
        sum += weights[k];
    }
    rep.checks.push_back({"weights sum to 1", std::abs(sum - 1.0) <= tol.weights, std::abs(sum - 1.0)});
    if (!all_passed(rep.checks)) {
        return nullptr;
    }
    FiniteProbSpace space(labels, weights, tol.weights);

    std::vector<RandomVariable> variables;
    std::set<std::string> names;
    const json &vars = array_field(doc, "variables", "model");
    for (std::size_t k = 0; k < vars.size(); ++k) {
        const std::string p = "variables[" + std::to_string(k) + "]";
        std::string name = name_of(vars[k], p, names);
        const json &vals = array_field(vars[k], "values", p);
        if (vals.size() != weights.size()) {
            fail(p + ".values", "expected one value per point");
        }
        std::vector<double> v;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            v.push_back(as_number(vals[i], p + ".values[" + std::to_string(i) + "]"));
        }
        variables.emplace_back(name, std::move(v));
    }

    std::vector<std::pair<std::string, Event>> contexts;
    std::set<std::string> context_names;
    if (auto it = doc.find("contexts"); it != doc.end()) {
        for (std::size_t k = 0; k < it->size(); ++k) {
            const json &c = (*it)[k];
            const std::string p = "contexts[" + std::to_string(k) + "]";
            std::string name = name_of(c, p, context_names);
            const json &pts = field(c, "points", p);
            Event e;
            if (pts.is_string() && pts.get<std::string>() == "all") {
                e = space.all();
            } else {
                if (!pts.is_array()) {
                    fail(p + ".points", "expected an array of point labels or \"all\"");
                }
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    std::string label = as_string(pts[i], p + ".points[" + std::to_string(i) + "]");
                    std::size_t idx;
                    try {
                        idx = space.index_of(label);
                    } catch (const LookupError &) {
                        fail(p + ".points[" + std::to_string(i) + "]", "unknown point '" + label + "'");
                    }
                    e = e | Event::of({idx});
                }
            }
            double m = space.measure(e);
            rep.checks.push_back({"context '" + name + "': positive measure", m > 0, m > 0 ? 0.0 : 1.0});
            contexts.emplace_back(name, e);
        }
    }
    if (!all_passed(rep.checks)) {
        return nullptr;
    }
    return std::make_unique<ClassicalModel>(std::move(space), std::move(variables), std::move(contexts), tol);
}

std::optional<Instrument> build_instrument(const json &obj, std::size_t dim, const std::string &p) {
    InstrumentKind kind = instrument_kind_from_string(as_string(field(obj, "kind", p), p + ".kind"));
    auto outcomes = as_outcomes(obj, p);
    const Tolerances lax = loose();
    switch (kind) {
        case InstrumentKind::projection:
            return Instrument::projection(as_matrices(obj, "projectors", dim, p), outcomes, lax);
        case InstrumentKind::atomic:
            return Instrument::atomic(as_matrices(obj, "kraus", dim, p), outcomes, lax);
        case InstrumentKind::measure_and_prepare:
            return Instrument::measure_and_prepare(as_matrices(obj, "effects", dim, p),
                                                   as_matrices(obj, "prepared", dim, p), outcomes, lax);
        case InstrumentKind::general:
            return Instrument::general(as_matrices(obj, "superoperators", dim * dim, p), outcomes, lax);
    }
    return std::nullopt;
}

std::unique_ptr<ContextualModel> assemble_quantum(const json &doc, const std::string &kind, const Tolerances &tol,
                                                  ValidationReport &rep) {
    const json &d = field(doc, "dim", "model");
    if (!d.is_number_unsigned() || d.get<std::size_t>() == 0 || d.get<std::size_t>() > 16) {
        fail("dim", "expected an integer between 1 and 16");
    }
    const std::size_t dim = d.get<std::size_t>();
    auto model = std::make_unique<QuantumModel>(dim, tol);
    std::set<std::string> names;
    bool ok = true;

    if (auto it = doc.find("observables"); it != doc.end()) {
        for (std::size_t k = 0; k < it->size(); ++k) {
            const json &o = (*it)[k];
            const std::string p = "observables[" + std::to_string(k) + "]";
            std::string name = name_of(o, p, names);
            CMatrix m = as_square(field(o, "matrix", p), dim, p + ".matrix");
            std::vector<std::string> labels;
            if (auto l = o.find("labels"); l != o.end()) {
                for (std::size_t i = 0; i < l->size(); ++i) {
                    labels.push_back(as_string((*l)[i], p + ".labels[" + std::to_string(i) + "]"));
                }
            }
            double h = hermitian_residual(m);
            bool herm = h <= tol.hermitian * std::max(1.0, max_norm(m));
            rep.checks.push_back({"observable '" + name + "': hermitian", herm, h});
            if (!herm) {
                ok = false;
                continue;
            }
            HermitianObservable obs(name, m, tol, labels);
            double r = max_abs_diff(obs.spectral().reconstruct(), obs.matrix());
            rep.checks.push_back({"observable '" + name + "': spectral reconstruction", true, r});
            model->add_observable(std::move(obs));
        }
    }

    if (auto it = doc.find("instruments"); it != doc.end()) {
        for (std::size_t k = 0; k < it->size(); ++k) {
            const json &o = (*it)[k];
            const std::string p = "instruments[" + std::to_string(k) + "]";
            auto target = o.find("observable");
            std::string name = target == o.end() ? name_of(o, p, names)
                                                 : as_string(field(o, "name", p), p + ".name");
            std::optional<Instrument> inst;
            try {
                inst = build_instrument(o, dim, p);
            } catch (const ModelFileError &) {
                throw;
            } catch (const Error &e) {
                fail(p, e.what());
            }
            if (kind == "von_neumann" && inst->kind() != InstrumentKind::projection) {
                fail(p + ".kind", "von_neumann models accept projection instruments only");
            }
            auto checks = inst->check(tol);
            add_prefixed(rep, "instrument '" + name + "'", checks);
            if (!all_passed(checks)) {
                ok = false;
                continue;
            }
            if (target == o.end()) {
                model->add_instrument(name, std::move(*inst));
            } else {
                std::string obs = as_string(*target, p + ".observable");
                try {
                    model->add_instrument_for(name, obs, std::move(*inst));
                    rep.checks.push_back({"instrument '" + name + "': generates observable '" + obs + "'", true, 0});
                } catch (const InvariantError &e) {
                    rep.checks.push_back(
                        {"instrument '" + name + "': generates observable '" + obs + "'", false, e.residual});
                    ok = false;
                } catch (const LookupError &e) {
                    fail(p + ".observable", e.what());
                }
            }
        }
    }

    std::set<std::string> context_names;
    if (auto it = doc.find("contexts"); it != doc.end()) {
        for (std::size_t k = 0; k < it->size(); ++k) {
            const json &c = (*it)[k];
            const std::string p = "contexts[" + std::to_string(k) + "]";
            std::string name = name_of(c, p, context_names);
            const std::string prefix = "context '" + name + "'";
            if (auto s = c.find("state"); s != c.end()) {
                auto psi = as_vector(*s, p + ".state");
                if (psi.size() != dim) {
                    fail(p + ".state", "expected " + std::to_string(dim) + " amplitudes");
                }
                double r = std::abs(norm(psi) - 1.0);
                bool unit = r <= tol.state;
                rep.checks.push_back({prefix + ": unit norm", unit, r});
                if (unit) {
                    model->add_context(name, DensityMatrix::pure(psi));
                } else {
                    ok = false;
                }
            } else {
                CMatrix rho = as_square(field(c, "density", p), dim, p + ".density");
                auto checks = DensityMatrix::check(rho, tol);
                add_prefixed(rep, prefix, checks);
                if (all_passed(checks)) {
                    model->add_context(name, DensityMatrix(rho, tol));
                } else {
                    ok = false;
                }
            }
        }
    }
    if (kind == "instrument" && model->instruments().empty()) {
        fail("instruments", "an instrument model needs at least one instrument or observable");
    }
    return ok ? std::move(model) : nullptr;
}

std::unique_ptr<ContextualModel> assemble_measure(const json &doc, const Tolerances &tol, ValidationReport &rep) {
    const json &pts = array_field(doc, "points", "model");
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        labels.push_back(as_string(pts[k], "points[" + std::to_string(k) + "]"));
    }
    if (labels.empty()) {
        fail("points", "expected at least one point");
    }
    const std::size_t n = labels.size();
    auto model = std::make_unique<MeasureModel>(labels, tol);
    std::set<std::string> names;
    bool ok = true;
    const json &insts = array_field(doc, "instruments", "model");
    for (std::size_t k = 0; k < insts.size(); ++k) {
        const json &o = insts[k];
        const std::string p = "instruments[" + std::to_string(k) + "]";
        std::string name = name_of(o, p, names);
        if (auto cond = o.find("conditioning"); cond != o.end()) {
            if (!cond->is_array() || cond->size() != n) {
                fail(p + ".conditioning", "expected one value per point");
            }
            std::vector<double> v;
            for (std::size_t i = 0; i < n; ++i) {
                v.push_back(as_number((*cond)[i], p + ".conditioning[" + std::to_string(i) + "]"));
            }
            model->add_instrument(name, conditioning_instrument(RandomVariable(name, v)));
            rep.checks.push_back({"instrument '" + name + "': conditioning maps", true, 0});
            continue;
        }
        const json &maps = array_field(o, "maps", p);
        std::vector<RealMatrix> js;
        for (std::size_t x = 0; x < maps.size(); ++x) {
            const std::string q = p + ".maps[" + std::to_string(x) + "]";
            CMatrix m = as_square(maps[x], n, q);
            RealMatrix r(n, std::vector<double>(n));
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (m(i, j).imag() != 0.0) {
                        fail(q, "entries must be real");
                    }
                    r[i][j] = m(i, j).real();
                }
            }
            js.push_back(std::move(r));
        }
        if (js.empty()) {
            fail(p + ".maps", "expected at least one map");
        }
        auto checks = MInstrument::check(js, tol.weights);
        add_prefixed(rep, "instrument '" + name + "'", checks);
        if (!all_passed(checks)) {
            ok = false;
            continue;
        }
        model->add_instrument(name, MInstrument(std::move(js), as_outcomes(o, p), tol.weights));
    }
    std::set<std::string> context_names;
    if (auto it = doc.find("contexts"); it != doc.end()) {
        for (std::size_t k = 0; k < it->size(); ++k) {
            const json &c = (*it)[k];
            const std::string p = "contexts[" + std::to_string(k) + "]";
            std::string name = name_of(c, p, context_names);
            const json &m = array_field(c, "measure", p);
            if (m.size() != n) {
                fail(p + ".measure", "expected one value per point");
            }
            std::vector<double> v;
            for (std::size_t i = 0; i < n; ++i) {
                v.push_back(as_number(m[i], p + ".measure[" + std::to_string(i) + "]"));
            }
            MeasureVector mu(labels, std::move(v));
            auto checks = mu.state_checks(tol.weights);
            add_prefixed(rep, "context '" + name + "'", checks);
            if (all_passed(checks)) {
                model->add_context(name, std::move(mu));
            } else {
                ok = false;
            }
        }
    }
    return ok ? std::move(model) : nullptr;
}

std::unique_ptr<ContextualModel> assemble(const json &doc, const Tolerances &tol, ValidationReport &rep) {
    if (!doc.is_object()) {
        fail("model", "expected a JSON object");
    }
    rep.kind = as_string(field(doc, "kind", "model"), "kind");
    if (rep.kind == "classical") {
        return assemble_classical(doc, tol, rep);
    }
    if (rep.kind == "von_neumann" || rep.kind == "instrument") {
        return assemble_quantum(doc, rep.kind, tol, rep);
    }
    if (rep.kind == "measure_lsr") {
        return assemble_measure(doc, tol, rep);
    }
    fail("kind", "unknown model kind '" + rep.kind + "'");
}

}  // namespace

bool ValidationReport::ok() const {
    return all_passed(checks);
}

json parse_model_text(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ModelFileError(std::string("parse error: ") + e.what());
    }
}

json read_model_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ModelFileError(path + ": cannot open file");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model_text(buf.str());
}

std::string model_digest(const json &doc) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : doc.dump()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

ValidationReport validate_model(const json &doc, const ToleranceOverrides &overrides) {
    ValidationReport rep;
    assemble(doc, read_tolerances(doc, overrides), rep);
    return rep;
}

LoadedModel load_model(const json &doc, const ToleranceOverrides &overrides) {
    ValidationReport rep;
    Tolerances tol = read_tolerances(doc, overrides);
    auto model = assemble(doc, tol, rep);
    if (!model || !rep.ok()) {
        std::vector<InvariantCheck> failed;
        std::string msg = "model validation failed:";
        for (const auto &c : rep.checks) {
            if (!c.passed) {
                failed.push_back(c);
                msg += " " + c.name + " (residual " + InvariantError::format_residual(c.residual) + ");";
            }
        }
        throw ValidationFailure(msg, std::move(failed));
    }
    return {rep.kind, model_digest(doc), tol, std::move(model)};
}

std::pair<std::string, double> parse_tolerance_override(const std::string &text) {
    auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw InputError("tolerance override '" + text + "' is not key=value");
    }
    std::string key = text.substr(0, eq);
    std::string value = text.substr(eq + 1);
    double v = label_value(value);
    if (std::isnan(v) || v < 0) {
        throw InputError("tolerance override '" + text + "' needs a nonnegative number");
    }
    if (!Tolerances{}.set(key, v)) {
        throw InputError("unknown tolerance '" + key + "'");
    }
    return {key, v};
}

}  // namespace cmm

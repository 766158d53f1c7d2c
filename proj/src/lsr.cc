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
#include "cmm/lsr.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cmm {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void require_same_size(std::size_t expected, std::size_t got, const std::string &what) {
    if (expected != got) {
        throw ShapeError(what + ": expected size " + std::to_string(expected) + ", got " + std::to_string(got));
    }
}

}  // namespace

MeasureVector::MeasureVector(std::vector<std::string> labels, std::vector<double> values)
    : labels_(std::move(labels)), values_(std::move(values)) {
    require_same_size(labels_.size(), values_.size(), "measure vector");
    if (values_.empty()) {
        throw InputError("measure vector needs at least one point");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw InputError("measure vector has a non-finite value");
        }
    }
}

MeasureVector MeasureVector::conditioned(const FiniteProbSpace &space, Event context) {
    double pc = space.measure(context);
    if (pc <= 0) {
        throw ConditioningError("context " + space.describe(context) + " has measure zero");
    }
    std::vector<double> v(space.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = context.contains(i) ? space.weight(i) / pc : 0.0;
    }
    return MeasureVector(space.labels(), std::move(v));
}

double MeasureVector::mass() const {
    double s = 0;
    for (double v : values_) {
        s += v;
    }
    return s;
}

std::vector<InvariantCheck> MeasureVector::state_checks(double tol) const {
    double neg = 0;
    for (double v : values_) {
        neg = std::max(neg, -v);
    }
    double m = std::abs(mass() - 1.0);
    return {{"measure nonnegative", neg <= tol, neg}, {"total mass 1", m <= tol, m}};
}

bool MeasureVector::is_state(double tol) const {
    auto checks = state_checks(tol);
    return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
}

bool MEffect::is_effect(double tol) const {
    return std::all_of(coefficients_.begin(), coefficients_.end(),
                       [tol](double c) { return c >= -tol && c <= 1.0 + tol; });
}

double MEffect::operator()(const MeasureVector &mu) const {
    require_same_size(coefficients_.size(), mu.size(), "effect evaluation");
    double s = 0;
    for (std::size_t i = 0; i < coefficients_.size(); ++i) {
        s += coefficients_[i] * mu.values()[i];
    }
    return s;
}

MInstrument::MInstrument(std::vector<RealMatrix> maps, std::vector<Outcome> outcomes, double tol)
    : maps_(std::move(maps)), outcomes_(std::move(outcomes)) {
    if (maps_.empty()) {
        throw InputError("measure instrument needs at least one map");
    }
    if (outcomes_.empty()) {
        for (std::size_t k = 0; k < maps_.size(); ++k) {
            outcomes_.push_back({std::to_string(k), static_cast<double>(k)});
        }
    }
    require_same_size(maps_.size(), outcomes_.size(), "measure instrument outcomes");
    require_all(check(maps_, tol), "measure instrument");
}

std::vector<InvariantCheck> MInstrument::check(const std::vector<RealMatrix> &maps, double tol) {
    const std::size_t n = maps.front().size();
    double neg = 0;
    std::vector<double> column_sums(n, 0.0);
    for (const auto &j : maps) {
        require_same_size(n, j.size(), "measure instrument rows");
        for (std::size_t r = 0; r < n; ++r) {
            require_same_size(n, j[r].size(), "measure instrument columns");
            for (std::size_t c = 0; c < n; ++c) {
                neg = std::max(neg, -j[r][c]);
                column_sums[c] += j[r][c];
            }
        }
    }
    double stoch = 0;
    for (double s : column_sums) {
        stoch = std::max(stoch, std::abs(s - 1.0));
    }
    return {{"maps preserve the positive cone", neg <= tol, neg},
            {"total map is column-stochastic", stoch <= tol, stoch}};
}

std::vector<double> MInstrument::apply(std::size_t x, const std::vector<double> &mu) const {
    if (x >= maps_.size()) {
        throw LookupError("measure instrument has no outcome index " + std::to_string(x));
    }
    const RealMatrix &j = maps_[x];
    require_same_size(j.size(), mu.size(), "measure instrument input");
    std::vector<double> out(mu.size(), 0.0);
    for (std::size_t r = 0; r < j.size(); ++r) {
        for (std::size_t c = 0; c < j.size(); ++c) {
            out[r] += j[r][c] * mu[c];
        }
    }
    return out;
}

MInstrument conditioning_instrument(const RandomVariable &a) {
    const std::size_t n = a.values().size();
    std::vector<RealMatrix> maps;
    for (std::size_t x = 0; x < a.outcomes().size(); ++x) {
        RealMatrix j(n, std::vector<double>(n, 0.0));
        Event level = a.level_set(x);
        for (std::size_t i = 0; i < n; ++i) {
            j[i][i] = level.contains(i) ? 1.0 : 0.0;
        }
        maps.push_back(std::move(j));
    }
    return MInstrument(std::move(maps), a.outcomes());
}

MInstrument identity_instrument(std::size_t dim) {
    RealMatrix j(dim, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) {
        j[i][i] = 1.0;
    }
    return MInstrument({std::move(j)}, {{"1", 1.0}});
}

MApplication m_instrument_apply(const MInstrument &inst, std::size_t x, const MeasureVector &mu, double eps_cond) {
    MApplication out;
    std::vector<double> v = inst.apply(x, mu.values());
    double mass = 0;
    for (double e : v) {
        mass += e;
    }
    out.prob = std::clamp(mass, 0.0, 1.0);
    if (out.prob > eps_cond) {
        for (double &e : v) {
            e /= mass;
        }
        out.updated = MeasureVector(mu.labels(), std::move(v));
    }
    return out;
}

std::vector<MEffect> m_povm_from_instrument(const MInstrument &inst, double tol) {
    const std::size_t n = inst.dim();
    std::vector<MEffect> effects;
    std::vector<double> total(n, 0.0);
    for (const auto &j : inst.maps()) {
        std::vector<double> c(n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t k = 0; k < n; ++k) {
                c[k] += j[r][k];
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            total[k] += c[k];
        }
        effects.emplace_back(std::move(c));
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(total[k] - 1.0) > tol) {
            throw InputError("effects do not sum to the unit functional (residual " + fmt(total[k] - 1.0) + ")");
        }
    }
    for (const auto &e : effects) {
        if (!e.is_effect(tol)) {
            throw InputError("derived functional has a coefficient outside [0, 1]");
        }
    }
    return effects;
}

std::string MeasureContext::describe() const {
    std::string s = "mu(";
    bool first = true;
    for (std::size_t i = 0; i < mu_.size(); ++i) {
        if (mu_.values()[i] == 0.0) {
            continue;
        }
        s += (first ? "" : ", ") + mu_.labels()[i] + ":" + fmt(mu_.values()[i]);
        first = false;
    }
    return s + ")";
}

const MeasureVector &measure_of(const Context &context) {
    auto *m = dynamic_cast<const MeasureContext *>(context.get());
    if (m == nullptr) {
        throw InputError("context does not belong to a measure model");
    }
    return m->measure();
}

MeasureModel::MeasureModel(std::vector<std::string> labels, Tolerances tolerances)
    : ContextualModel(tolerances), labels_(std::move(labels)) {
    if (labels_.empty()) {
        throw InputError("measure model needs at least one point");
    }
}

MeasureModel MeasureModel::from_classical(const ClassicalModel &model) {
    MeasureModel m(model.space().labels(), model.tolerances());
    for (const auto &rv : model.variables()) {
        m.add_instrument(rv.name(), conditioning_instrument(rv));
    }
    for (const auto &nc : model.named_contexts()) {
        auto *c = dynamic_cast<const ClassicalContext *>(nc.context.get());
        m.add_context(nc.name, MeasureVector::conditioned(model.space(), c->event()));
    }
    return m;
}

void MeasureModel::add_instrument(const std::string &name, MInstrument inst) {
    require_same_size(labels_.size(), inst.dim(), "instrument '" + name + "'");
    if (entries_.contains(name)) {
        throw InputError("duplicate instrument '" + name + "'");
    }
    auto effects = m_povm_from_instrument(inst, tolerances().weights);
    entries_.emplace(name, Entry{name, std::move(inst), std::move(effects)});
}

void MeasureModel::add_context(const std::string &name, MeasureVector mu) {
    require_same_size(labels_.size(), mu.size(), "context '" + name + "'");
    require_all(mu.state_checks(tolerances().weights), "context '" + name + "'");
    for (const auto &[n, m] : contexts_) {
        if (n == name) {
            throw InputError("duplicate context '" + name + "'");
        }
    }
    contexts_.emplace_back(name, std::move(mu));
}

const MeasureModel::Entry &MeasureModel::entry(std::string_view name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
        throw LookupError("unknown observable or instrument '" + std::string(name) + "'");
    }
    return it->second;
}

std::vector<std::string> MeasureModel::observables() const {
    std::vector<std::string> out;
    for (const auto &[name, e] : entries_) {
        out.push_back(name);
    }
    return out;
}

const std::vector<Outcome> &MeasureModel::outcomes(std::string_view observable) const {
    return entry(observable).inst.outcomes();
}

const std::string &MeasureModel::observable_of(std::string_view instrument) const {
    return entry(instrument).name;
}

const MInstrument &MeasureModel::instrument(std::string_view name) const {
    return entry(name).inst;
}

const std::vector<MEffect> &MeasureModel::effects(std::string_view observable) const {
    return entry(observable).effects;
}

Distribution MeasureModel::distribution(const Context &context, std::string_view observable) const {
    const MeasureVector &mu = measure_of(context);
    Distribution p;
    for (const auto &e : effects(observable)) {
        p.push_back(std::clamp(e(mu), 0.0, 1.0));
    }
    return p;
}

std::optional<Context> MeasureModel::update(const Context &context, std::string_view instrument_name,
                                            std::size_t outcome) const {
    auto applied = m_instrument_apply(instrument(instrument_name), outcome, measure_of(context), tolerances().eps_cond);
    if (!applied.updated) {
        return std::nullopt;
    }
    return std::make_shared<const MeasureContext>(std::move(*applied.updated));
}

std::vector<NamedContext> MeasureModel::named_contexts() const {
    std::vector<NamedContext> out;
    for (const auto &[name, mu] : contexts_) {
        out.push_back({name, std::make_shared<const MeasureContext>(mu)});
    }
    return out;
}

std::vector<Context> MeasureModel::default_context_sample(std::uint64_t seed) const {
    std::vector<Context> out = ContextualModel::default_context_sample(seed);
    const std::size_t n = labels_.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> v(n, 0.0);
        v[i] = 1.0;
        out.push_back(std::make_shared<const MeasureContext>(MeasureVector(labels_, std::move(v))));
    }
    out.push_back(std::make_shared<const MeasureContext>(
        MeasureVector(labels_, std::vector<double>(n, 1.0 / static_cast<double>(n)))));
    return out;
}

std::size_t MackeyEmbedding::column(std::string_view observable, std::size_t outcome) const {
    for (std::size_t k = 0; k < coordinates.size(); ++k) {
        if (coordinates[k].first == observable && coordinates[k].second == outcome) {
            return k;
        }
    }
    throw LookupError("no coordinate (" + std::string(observable) + ", " + std::to_string(outcome) + ")");
}

MackeyEmbedding mackey_embed(const ContextualModel &model, const std::vector<NamedContext> &contexts,
                             const std::vector<std::string> &observables) {
    MackeyEmbedding emb;
    for (const auto &obs : observables) {
        const auto &outs = model.outcomes(obs);
        for (std::size_t x = 0; x < outs.size(); ++x) {
            emb.coordinates.emplace_back(obs, x);
            emb.coordinate_labels.push_back(obs + "=" + outs[x].label);
        }
    }
    for (const auto &nc : contexts) {
        emb.context_names.push_back(nc.name);
        std::vector<double> row;
        for (const auto &obs : observables) {
            Distribution p = model.distribution(nc.context, obs);
            double sum = 0;
            for (double v : p) {
                row.push_back(v);
                sum += v;
            }
            emb.block_residual = std::max(emb.block_residual, std::abs(sum - 1.0));
        }
        emb.vectors.push_back(std::move(row));
    }
    const double tol = model.tolerances().eps_identity;
    for (std::size_t i = 0; i < emb.vectors.size() && !emb.collision; ++i) {
        for (std::size_t j = i + 1; j < emb.vectors.size(); ++j) {
            double d = 0;
            for (std::size_t k = 0; k < emb.vectors[i].size(); ++k) {
                d = std::max(d, std::abs(emb.vectors[i][k] - emb.vectors[j][k]));
            }
            if (d <= tol) {
                emb.separated = false;
                emb.collision = {i, j};
                break;
            }
        }
    }
    return emb;
}

double effect_eval(const MackeyEmbedding &embedding, std::string_view observable, std::size_t outcome,
                   const std::vector<double> &context_vector) {
    require_same_size(embedding.coordinates.size(), context_vector.size(), "context vector");
    return context_vector[embedding.column(observable, outcome)];
}

double unit_functional(const MackeyEmbedding &embedding, std::string_view observable,
                       const std::vector<double> &context_vector) {
    require_same_size(embedding.coordinates.size(), context_vector.size(), "context vector");
    double s = 0;
    bool any = false;
    for (std::size_t k = 0; k < embedding.coordinates.size(); ++k) {
        if (embedding.coordinates[k].first == observable) {
            s += context_vector[k];
            any = true;
        }
    }
    if (!any) {
        throw LookupError("no coordinates for observable '" + std::string(observable) + "'");
    }
    return s;
}

std::vector<double> mixture(double p, const std::vector<double> &v1, const std::vector<double> &v2) {
    require_same_size(v1.size(), v2.size(), "mixture");
    std::vector<double> out(v1.size());
    for (std::size_t k = 0; k < v1.size(); ++k) {
        out[k] = p * v1[k] + (1 - p) * v2[k];
    }
    return out;
}

}  // namespace cmm

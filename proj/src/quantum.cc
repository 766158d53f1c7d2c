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
#include "cmm/quantum.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "cmm/errors.h"
#include "cmm/quantum_search.h"

namespace cmm {

namespace pauli {
CMatrix x() {
    return {{0, 1}, {1, 0}};
}
CMatrix y() {
    return {{0, Complex(0, -1)}, {Complex(0, 1), 0}};
}
CMatrix z() {
    return {{1, 0}, {0, -1}};
}
CMatrix along(double nx, double ny, double nz) {
    return Complex(nx) * x() + Complex(ny) * y() + Complex(nz) * z();
}
}  // namespace pauli

std::vector<Complex> basis_vector(std::size_t dim, std::size_t k) {
    std::vector<Complex> v(dim);
    v.at(k) = 1.0;
    return v;
}

namespace {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 5e-13 ? 0.0 : v);
    return buf;
}

std::string format_outcome(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.10g", std::abs(v) < 5e-13 ? 0.0 : v);
    return buf;
}

double trace_residual(const CMatrix &m) {
    return std::abs(m.trace() - Complex(1.0));
}

/// Min eigenvalue with non-Hermitian input reported as failure rather than thrown.
std::optional<double> safe_min_eigenvalue(const CMatrix &m, double hermitian_tol) {
    try {
        return min_eigenvalue(m, hermitian_tol);
    } catch (const DomainError &) {
        return std::nullopt;
    }
}

void require_dim(const CMatrix &m, std::size_t dim, const std::string &what) {
    if (m.rows() != dim || m.cols() != dim) {
        throw ShapeError(what + ": expected " + std::to_string(dim) + "x" + std::to_string(dim) + ", got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

std::vector<Outcome> default_outcomes(std::size_t n, std::vector<Outcome> given) {
    if (given.empty()) {
        for (std::size_t k = 0; k < n; ++k) {
            given.push_back({std::to_string(k), static_cast<double>(k)});
        }
    }
    if (given.size() != n) {
        throw InputError("expected " + std::to_string(n) + " outcomes, got " + std::to_string(given.size()));
    }
    std::set<std::string> seen;
    for (const auto &o : given) {
        if (!seen.insert(o.label).second) {
            throw InputError("duplicate outcome label '" + o.label + "'");
        }
    }
    return given;
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix m, const Tolerances &tol) {
    require_all(check(m, tol), "density matrix");
    matrix_ = m.hermitian_part();
}

std::vector<InvariantCheck> DensityMatrix::check(const CMatrix &m, const Tolerances &tol) {
    std::vector<InvariantCheck> out;
    if (!m.is_square() || m.rows() == 0) {
        out.push_back({"square", false, 1.0});
        return out;
    }
    double h = hermitian_residual(m);
    out.push_back({"hermitian", h <= tol.state, h});
    double t = trace_residual(m);
    out.push_back({"trace=1", t <= tol.state, t});
    auto lo = safe_min_eigenvalue(m.hermitian_part(), tol.hermitian);
    double neg = lo ? std::max(0.0, -*lo) : INFINITY;
    out.push_back({"psd", neg <= tol.operator_identity, neg});
    return out;
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
    auto v = normalized(std::vector<Complex>(psi.begin(), psi.end()));
    return trusted(CMatrix::projector(v));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    return trusted(Complex(1.0 / static_cast<double>(dim)) * CMatrix::identity(dim));
}

DensityMatrix DensityMatrix::trusted(CMatrix m) {
    DensityMatrix d;
    d.matrix_ = std::move(m);
    return d;
}

double DensityMatrix::expectation(const CMatrix &op) const {
    return trace_of_product(op, matrix_).real();
}

std::vector<Complex> random_pure_state(std::size_t dim, CounterRng &rng) {
    std::vector<Complex> v(dim);
    for (auto &z : v) {
        double re = rng.normal();
        double im = rng.normal();
        z = Complex(re, im);
    }
    return normalized(std::move(v));
}

DensityMatrix random_density_matrix(std::size_t dim, CounterRng &rng) {
    CMatrix g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            double re = rng.normal();
            double im = rng.normal();
            g(r, c) = Complex(re, im);
        }
    }
    CMatrix m = g * g.adjoint();
    m *= 1.0 / m.trace().real();
    return DensityMatrix::trusted(m.hermitian_part());
}

CMatrix random_unitary(std::size_t dim, CounterRng &rng) {
    std::vector<std::vector<Complex>> cols;
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<Complex> v(dim);
        for (auto &z : v) {
            double re = rng.normal();
            double im = rng.normal();
            z = Complex(re, im);
        }
        for (const auto &u : cols) {
            Complex proj = inner(u, v);
            for (std::size_t k = 0; k < dim; ++k) {
                v[k] -= proj * u[k];
            }
        }
        cols.push_back(normalized(std::move(v)));
    }
    CMatrix u(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t r = 0; r < dim; ++r) {
            u(r, c) = cols[c][r];
        }
    }
    return u;
}

CMatrix random_hermitian(std::size_t dim, CounterRng &rng) {
    CMatrix g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            double re = rng.normal();
            double im = rng.normal();
            g(r, c) = Complex(re, im);
        }
    }
    return g.hermitian_part();
}

HermitianObservable::HermitianObservable(std::string name, const CMatrix &matrix, const Tolerances &tol,
                                         std::vector<std::string> labels)
    : name_(std::move(name)), matrix_(matrix), spectral_(hermitian_eig(matrix, tol.cluster, tol.hermitian)) {
    matrix_ = matrix_.hermitian_part();
    double radius = 0;
    for (double e : spectral_.eigenvalues) {
        radius = std::max(radius, std::abs(e));
    }
    cluster_gap_ = tol.cluster * std::max(1.0, radius);
    if (!labels.empty() && labels.size() != spectral_.size()) {
        throw InputError("observable '" + name_ + "' has " + std::to_string(spectral_.size()) +
                         " distinct eigenvalues but " + std::to_string(labels.size()) + " labels");
    }
    for (std::size_t k = 0; k < spectral_.size(); ++k) {
        double v = spectral_.eigenvalues[k];
        outcomes_.push_back({labels.empty() ? format_outcome(v) : labels[k], v});
    }
    double residual = max_abs_diff(spectral_.reconstruct(), matrix_);
    if (residual > tol.operator_identity * std::max(1.0, radius)) {
        throw InvariantError("spectral reconstruction", residual, "observable '" + name_ + "'");
    }
}

const CMatrix &HermitianObservable::projector(std::size_t x) const {
    if (x >= spectral_.size()) {
        throw LookupError("observable '" + name_ + "' has no outcome index " + std::to_string(x));
    }
    return spectral_.projectors[x];
}

std::size_t HermitianObservable::outcome_index(double value) const {
    for (std::size_t k = 0; k < spectral_.size(); ++k) {
        if (std::abs(spectral_.eigenvalues[k] - value) <= cluster_gap_) {
            return k;
        }
    }
    throw LookupError("observable '" + name_ + "' has no eigenvalue " + format_number(value));
}

double born_prob(const DensityMatrix &rho, const HermitianObservable &a, std::size_t x) {
    return std::clamp(rho.expectation(a.projector(x)), 0.0, 1.0);
}

DensityMatrix luders_update(const DensityMatrix &rho, const HermitianObservable &a, std::size_t x,
                            const Tolerances &tol) {
    double p = born_prob(rho, a, x);
    if (p <= tol.eps_cond) {
        throw ConditioningError("luders_update: outcome " + a.outcomes()[x].label + " of '" + a.name() +
                                "' has probability " + format_number(p));
    }
    const CMatrix &e = a.projector(x);
    CMatrix m = e * rho.matrix() * e;
    m *= 1.0 / p;
    return DensityMatrix::trusted(m.hermitian_part());
}

HermitianObservable function_of_observable(const HermitianObservable &a, const std::function<double(double)> &f,
                                           std::string name) {
    CMatrix m(a.matrix().rows(), a.matrix().cols());
    for (std::size_t k = 0; k < a.spectral().size(); ++k) {
        m += f(a.spectral().eigenvalues[k]) * a.spectral().projectors[k];
    }
    return HermitianObservable(name.empty() ? "f(" + a.name() + ")" : std::move(name), m);
}

Povm::Povm(std::vector<CMatrix> effects, std::vector<Outcome> outcomes, const Tolerances &tol)
    : effects_(std::move(effects)) {
    if (effects_.empty()) {
        throw InputError("POVM needs at least one effect");
    }
    outcomes_ = default_outcomes(effects_.size(), std::move(outcomes));
    require_all(check(effects_, tol), "POVM");
    for (auto &e : effects_) {
        e = e.hermitian_part();
    }
}

std::vector<InvariantCheck> Povm::check(const std::vector<CMatrix> &effects, const Tolerances &tol) {
    std::vector<InvariantCheck> out;
    const std::size_t dim = effects.front().rows();
    CMatrix sum(dim, dim);
    double worst_neg = 0;
    for (const auto &e : effects) {
        require_dim(e, dim, "POVM effect");
        auto lo = safe_min_eigenvalue(e, tol.operator_identity);
        worst_neg = std::max(worst_neg, lo ? -*lo : INFINITY);
        sum += e;
    }
    out.push_back({"effects psd", worst_neg <= tol.operator_identity, std::max(0.0, worst_neg)});
    double r = max_abs_diff(sum, CMatrix::identity(dim));
    out.push_back({"effects sum to identity", r <= tol.operator_identity, r});
    return out;
}

CMatrix Povm::effect(std::span<const std::size_t> subset) const {
    CMatrix m(dim(), dim());
    for (auto x : subset) {
        m += effects_.at(x);
    }
    return m;
}

Distribution Povm::probabilities(const DensityMatrix &rho) const {
    Distribution p;
    p.reserve(effects_.size());
    for (const auto &e : effects_) {
        p.push_back(std::clamp(rho.expectation(e), 0.0, 1.0));
    }
    return p;
}

Povm pvm_of(const HermitianObservable &a) {
    return Povm(a.spectral().projectors, a.outcomes());
}

std::string_view to_string(InstrumentKind kind) {
    switch (kind) {
        case InstrumentKind::projection:
            return "projection";
        case InstrumentKind::atomic:
            return "atomic";
        case InstrumentKind::measure_and_prepare:
            return "measure_and_prepare";
        case InstrumentKind::general:
            return "general";
    }
    return "general";
}

InstrumentKind instrument_kind_from_string(std::string_view s) {
    for (auto k : {InstrumentKind::projection, InstrumentKind::atomic, InstrumentKind::measure_and_prepare,
                   InstrumentKind::general}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw InputError("unknown instrument kind '" + std::string(s) + "'");
}

CMatrix kraus_superoperator(const CMatrix &v) {
    return kron(v.conj(), v);
}

CMatrix choi_matrix(const CMatrix &superoperator, std::size_t dim) {
    CMatrix j(dim * dim, dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            // Column i + dim*k of the superoperator is S(|i><k|) vectorized.
            for (std::size_t r = 0; r < dim; ++r) {
                for (std::size_t c = 0; c < dim; ++c) {
                    j(i * dim + r, k * dim + c) = superoperator(r + dim * c, i + dim * k);
                }
            }
        }
    }
    return j;
}

Instrument Instrument::projection(std::vector<CMatrix> projectors, std::vector<Outcome> outcomes,
                                  const Tolerances &tol) {
    if (projectors.empty()) {
        throw InputError("projection instrument needs at least one projector");
    }
    Instrument inst;
    inst.kind_ = InstrumentKind::projection;
    inst.dim_ = projectors.front().rows();
    inst.outcomes_ = default_outcomes(projectors.size(), std::move(outcomes));
    for (const auto &p : projectors) {
        require_dim(p, inst.dim_, "projector");
        inst.superops_.push_back(kraus_superoperator(p));
    }
    inst.operators_ = std::move(projectors);
    require_all(inst.check(tol), "projection instrument");
    return inst;
}

Instrument Instrument::atomic(std::vector<CMatrix> kraus, std::vector<Outcome> outcomes, const Tolerances &tol) {
    if (kraus.empty()) {
        throw InputError("atomic instrument needs at least one Kraus operator");
    }
    Instrument inst;
    inst.kind_ = InstrumentKind::atomic;
    inst.dim_ = kraus.front().rows();
    inst.outcomes_ = default_outcomes(kraus.size(), std::move(outcomes));
    for (const auto &v : kraus) {
        require_dim(v, inst.dim_, "Kraus operator");
        inst.superops_.push_back(kraus_superoperator(v));
    }
    inst.operators_ = std::move(kraus);
    require_all(inst.check(tol), "atomic instrument");
    return inst;
}

Instrument Instrument::measure_and_prepare(std::vector<CMatrix> effects, std::vector<CMatrix> prepared,
                                           std::vector<Outcome> outcomes, const Tolerances &tol) {
    if (effects.empty() || effects.size() != prepared.size()) {
        throw InputError("measure_and_prepare instrument needs one prepared state per effect");
    }
    Instrument inst;
    inst.kind_ = InstrumentKind::measure_and_prepare;
    inst.dim_ = effects.front().rows();
    inst.outcomes_ = default_outcomes(effects.size(), std::move(outcomes));
    const std::size_t d2 = inst.dim_ * inst.dim_;
    for (std::size_t x = 0; x < effects.size(); ++x) {
        require_dim(effects[x], inst.dim_, "effect");
        require_dim(prepared[x], inst.dim_, "prepared state");
        auto phi = vectorize(prepared[x]);
        auto a_t = vectorize(effects[x].transpose());
        CMatrix s(d2, d2);
        for (std::size_t r = 0; r < d2; ++r) {
            for (std::size_t c = 0; c < d2; ++c) {
                s(r, c) = phi[r] * a_t[c];
            }
        }
        inst.superops_.push_back(std::move(s));
    }
    inst.stored_effects_ = std::move(effects);
    inst.prepared_ = std::move(prepared);
    require_all(inst.check(tol), "measure_and_prepare instrument");
    return inst;
}

Instrument Instrument::general(std::vector<CMatrix> superoperators, std::vector<Outcome> outcomes,
                               const Tolerances &tol) {
    if (superoperators.empty()) {
        throw InputError("general instrument needs at least one superoperator");
    }
    Instrument inst;
    inst.kind_ = InstrumentKind::general;
    std::size_t d2 = superoperators.front().rows();
    auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d2))));
    if (d * d != d2) {
        throw ShapeError("superoperator size " + std::to_string(d2) + " is not a square dimension");
    }
    inst.dim_ = d;
    inst.outcomes_ = default_outcomes(superoperators.size(), std::move(outcomes));
    for (const auto &s : superoperators) {
        require_dim(s, d2, "superoperator");
    }
    inst.superops_ = std::move(superoperators);
    require_all(inst.check(tol), "general instrument");
    return inst;
}

std::vector<InvariantCheck> Instrument::check(const Tolerances &tol) const {
    std::vector<InvariantCheck> out;
    const CMatrix id = CMatrix::identity(dim_);
    switch (kind_) {
        case InstrumentKind::projection: {
            CMatrix sum(dim_, dim_);
            double herm = 0, idem = 0, orth = 0;
            for (std::size_t x = 0; x < operators_.size(); ++x) {
                const CMatrix &p = operators_[x];
                herm = std::max(herm, hermitian_residual(p));
                idem = std::max(idem, max_abs_diff(p * p, p));
                for (std::size_t y = x + 1; y < operators_.size(); ++y) {
                    orth = std::max(orth, max_norm(p * operators_[y]));
                }
                sum += p;
            }
            out.push_back({"projectors hermitian", herm <= tol.operator_identity, herm});
            out.push_back({"projectors idempotent", idem <= tol.operator_identity, idem});
            out.push_back({"projectors orthogonal", orth <= tol.operator_identity, orth});
            double r = max_abs_diff(sum, id);
            out.push_back({"projectors sum to identity", r <= tol.operator_identity, r});
            break;
        }
        case InstrumentKind::atomic: {
            CMatrix sum(dim_, dim_);
            for (const auto &v : operators_) {
                sum += v.adjoint() * v;
            }
            double r = max_abs_diff(sum, id);
            out.push_back({"kraus normalization", r <= tol.operator_identity, r});
            break;
        }
        case InstrumentKind::measure_and_prepare: {
            for (const auto &c : Povm::check(stored_effects_, tol)) {
                out.push_back(c);
            }
            double worst = 0;
            bool ok = true;
            for (const auto &phi : prepared_) {
                for (const auto &c : DensityMatrix::check(phi, tol)) {
                    ok = ok && c.passed;
                    worst = std::max(worst, c.residual);
                }
            }
            out.push_back({"prepared states are density matrices", ok, worst});
            break;
        }
        case InstrumentKind::general: {
            CMatrix total(dim_, dim_);
            for (std::size_t x = 0; x < superops_.size(); ++x) {
                total += apply_adjoint(x, id);
            }
            double tp = max_abs_diff(total, id);
            out.push_back({"trace preserving", tp <= tol.operator_identity, tp});
            CounterRng rng(0x9051717e5ull);
            double worst_neg = 0, worst_herm = 0;
            for (int k = 0; k < 50; ++k) {
                DensityMatrix rho = random_density_matrix(dim_, rng);
                for (std::size_t x = 0; x < superops_.size(); ++x) {
                    CMatrix out_x = apply(x, rho.matrix());
                    double h = hermitian_residual(out_x);
                    worst_herm = std::max(worst_herm, h);
                    auto lo = safe_min_eigenvalue(out_x.hermitian_part(), tol.hermitian);
                    worst_neg = std::max(worst_neg, lo ? -*lo : INFINITY);
                }
            }
            out.push_back({"hermiticity preserving (sampled)", worst_herm <= tol.operator_identity, worst_herm});
            out.push_back({"positive on sampled states", worst_neg <= tol.operator_identity, std::max(0.0, worst_neg)});
            break;
        }
    }
    return out;
}

const CMatrix &Instrument::superoperator(std::size_t x) const {
    if (x >= superops_.size()) {
        throw LookupError("instrument has no outcome index " + std::to_string(x));
    }
    return superops_[x];
}

CMatrix Instrument::apply(std::size_t x, const CMatrix &rho) const {
    require_dim(rho, dim_, "instrument input");
    auto v = superoperator(x) * std::span<const Complex>(vectorize(rho));
    return unvectorize(v, dim_);
}

CMatrix Instrument::apply_adjoint(std::size_t x, const CMatrix &op) const {
    require_dim(op, dim_, "adjoint input");
    auto v = superoperator(x).adjoint() * std::span<const Complex>(vectorize(op));
    return unvectorize(v, dim_);
}

InstrumentApplication instrument_apply(const Instrument &inst, std::size_t x, const DensityMatrix &rho,
                                       const Tolerances &tol) {
    InstrumentApplication out;
    out.subnormalized = inst.apply(x, rho.matrix());
    out.prob = std::clamp(out.subnormalized.trace().real(), 0.0, 1.0);
    if (out.prob > tol.eps_cond) {
        CMatrix m = out.subnormalized;
        m *= 1.0 / out.subnormalized.trace().real();
        out.updated = DensityMatrix::trusted(m.hermitian_part());
    }
    return out;
}

Instrument luders_instrument(const HermitianObservable &a, const Tolerances &tol) {
    return Instrument::projection(a.spectral().projectors, a.outcomes(), tol);
}

Povm povm_from_instrument(const Instrument &inst, const Tolerances &tol) {
    std::vector<CMatrix> effects;
    const CMatrix id = CMatrix::identity(inst.dim());
    for (std::size_t x = 0; x < inst.outcomes().size(); ++x) {
        effects.push_back(inst.apply_adjoint(x, id));
    }
    return Povm(std::move(effects), inst.outcomes(), tol);
}

std::vector<bool> cp_check(const Instrument &inst, const Tolerances &tol) {
    std::vector<bool> out(inst.outcomes().size(), true);
    if (inst.kind() == InstrumentKind::projection || inst.kind() == InstrumentKind::atomic) {
        return out;
    }
    for (std::size_t x = 0; x < out.size(); ++x) {
        CMatrix j = choi_matrix(inst.superoperator(x), inst.dim());
        auto lo = safe_min_eigenvalue(j, tol.operator_identity);
        out[x] = lo.has_value() && *lo >= -tol.operator_identity;
    }
    return out;
}

PovmCompatibility povm_compat_verify(const Povm &a, const Povm &b, const std::vector<CMatrix> &table,
                                     const Tolerances &tol) {
    const std::size_t na = a.effects().size(), nb = b.effects().size();
    if (table.size() != na * nb) {
        throw InputError("joint effect table has " + std::to_string(table.size()) + " entries, expected " +
                         std::to_string(na * nb));
    }
    if (a.dim() != b.dim()) {
        throw ShapeError("POVMs act on different dimensions");
    }
    PovmCompatibility out;
    out.compatible = true;
    for (std::size_t k = 0; k < table.size(); ++k) {
        require_dim(table[k], a.dim(), "joint effect");
        auto lo = safe_min_eigenvalue(table[k], tol.operator_identity);
        if (!lo) {
            out.compatible = false;
            out.residual = std::max(out.residual, hermitian_residual(table[k]));
            out.reason = "joint effect " + std::to_string(k) + " is not Hermitian";
        } else if (*lo < -tol.operator_identity) {
            out.compatible = false;
            out.residual = std::max(out.residual, -*lo);
            out.reason = "joint effect " + std::to_string(k) + " is not positive semidefinite";
        }
    }
    for (std::size_t x = 0; x < na; ++x) {
        CMatrix s(a.dim(), a.dim());
        for (std::size_t y = 0; y < nb; ++y) {
            s += table[x * nb + y];
        }
        double r = max_abs_diff(s, a.effects()[x]);
        out.residual = std::max(out.residual, r);
        if (r > tol.operator_identity) {
            out.compatible = false;
            out.reason = "marginal over B differs from A(" + a.outcomes()[x].label + ")";
        }
    }
    for (std::size_t y = 0; y < nb; ++y) {
        CMatrix s(a.dim(), a.dim());
        for (std::size_t x = 0; x < na; ++x) {
            s += table[x * nb + y];
        }
        double r = max_abs_diff(s, b.effects()[y]);
        out.residual = std::max(out.residual, r);
        if (r > tol.operator_identity) {
            out.compatible = false;
            out.reason = "marginal over A differs from B(" + b.outcomes()[y].label + ")";
        }
    }
    return out;
}

JointDistribution joint_born(const std::vector<CMatrix> &table, std::size_t na, std::size_t nb,
                             const DensityMatrix &rho) {
    if (table.size() != na * nb) {
        throw InputError("joint effect table size mismatch");
    }
    JointDistribution j;
    j.rows = na;
    j.cols = nb;
    for (const auto &c : table) {
        j.p.push_back(rho.expectation(c));
    }
    return j;
}

QuantumInterference quantum_interference(const DensityMatrix &rho, const HermitianObservable &a,
                                         const HermitianObservable &b, std::size_t y, const Tolerances &tol) {
    QuantumInterference out;
    const CMatrix &eb = b.projector(y);
    const std::size_t na = a.spectral().size();
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            if (i == j) {
                continue;
            }
            out.delta_cross_terms +=
                trace_of_product(a.projector(i) * eb * a.projector(j), rho.matrix()).real();
        }
    }
    double purity = trace_of_product(rho.matrix(), rho.matrix()).real();
    out.pure = std::abs(purity - 1.0) <= 1e-9;

    QuantumModel model(rho.dim(), tol);
    model.add_observable(a);
    if (b.name() != a.name()) {
        model.add_observable(b);
    }
    Context c = make_quantum_context(rho);
    out.datum = ftp_interference(model, c, a.name(), b.name(), y);
    if (out.datum.theta) {
        Distribution p_a = model.distribution(c, a.name());
        double prod = 1;
        for (std::size_t x = 0; x < 2; ++x) {
            prod *= p_a[x] * conditional_prob(model, c, a.name(), x, b.name(), y);
        }
        out.delta_from_theta = 2.0 * std::cos(*out.datum.theta) * std::sqrt(prod);
    }
    return out;
}

std::string QuantumContext::describe() const {
    const CMatrix &m = rho_.matrix();
    std::string s = "rho[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        s += r ? "; " : "";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            s += c ? ", " : "";
            const Complex z = m(r, c);
            s += format_number(z.real());
            if (std::abs(z.imag()) >= 5e-13) {
                s += (z.imag() < 0 ? "-" : "+") + format_number(std::abs(z.imag())) + "i";
            }
        }
    }
    return s + "]";
}

const DensityMatrix &density_of(const Context &context) {
    auto *q = dynamic_cast<const QuantumContext *>(context.get());
    if (q == nullptr) {
        throw InputError("context does not belong to a quantum model");
    }
    return q->rho();
}

Context make_quantum_context(DensityMatrix rho) {
    return std::make_shared<const QuantumContext>(std::move(rho));
}

QuantumModel::QuantumModel(std::size_t dim, Tolerances tolerances) : ContextualModel(tolerances), dim_(dim) {
    if (dim == 0 || dim > 16) {
        throw InputError("quantum models support dimensions 1..16, got " + std::to_string(dim));
    }
}

void QuantumModel::add_observable(HermitianObservable a) {
    require_dim(a.matrix(), dim_, "observable '" + a.name() + "'");
    std::string name = a.name();
    if (observables_.contains(name) || instruments_.contains(name)) {
        throw InputError("duplicate observable or instrument '" + name + "'");
    }
    Instrument inst = luders_instrument(a, tolerances());
    observables_.emplace(name, ObservableEntry{pvm_of(a), std::move(a)});
    instruments_.emplace(name, InstrumentEntry{std::move(inst), name});
}

void QuantumModel::add_instrument(const std::string &name, Instrument inst) {
    if (inst.dim() != dim_) {
        throw ShapeError("instrument '" + name + "' has dimension " + std::to_string(inst.dim()));
    }
    if (observables_.contains(name) || instruments_.contains(name)) {
        throw InputError("duplicate observable or instrument '" + name + "'");
    }
    Povm povm = povm_from_instrument(inst, tolerances());
    observables_.emplace(name, ObservableEntry{std::move(povm), std::nullopt});
    instruments_.emplace(name, InstrumentEntry{std::move(inst), name});
}

void QuantumModel::add_instrument_for(const std::string &name, const std::string &observable, Instrument inst) {
    if (inst.dim() != dim_) {
        throw ShapeError("instrument '" + name + "' has dimension " + std::to_string(inst.dim()));
    }
    if (instruments_.contains(name)) {
        throw InputError("duplicate instrument '" + name + "'");
    }
    const Povm &target = povm(observable);
    Povm induced = povm_from_instrument(inst, tolerances());
    if (induced.effects().size() != target.effects().size()) {
        throw InvariantError("instrument generates its observable", 1.0,
                             "instrument '" + name + "' has a different number of outcomes than '" + observable + "'");
    }
    double r = 0;
    for (std::size_t x = 0; x < induced.effects().size(); ++x) {
        r = std::max(r, max_abs_diff(induced.effects()[x], target.effects()[x]));
    }
    if (r > tolerances().operator_identity) {
        throw InvariantError("instrument generates its observable", r, "instrument '" + name + "'");
    }
    instruments_.emplace(name, InstrumentEntry{std::move(inst), observable});
}

void QuantumModel::add_context(const std::string &name, DensityMatrix rho) {
    require_dim(rho.matrix(), dim_, "context '" + name + "'");
    for (const auto &[n, r] : contexts_) {
        if (n == name) {
            throw InputError("duplicate context '" + name + "'");
        }
    }
    contexts_.emplace_back(name, std::move(rho));
}

std::string_view QuantumModel::backend() const {
    return all_projective() ? "von_neumann" : "instrument";
}

bool QuantumModel::all_projective() const {
    for (const auto &[name, e] : instruments_) {
        if (e.inst.kind() != InstrumentKind::projection) {
            return false;
        }
    }
    return true;
}

std::vector<std::string> QuantumModel::observables() const {
    std::vector<std::string> out;
    for (const auto &[name, e] : observables_) {
        out.push_back(name);
    }
    return out;
}

std::vector<std::string> QuantumModel::instruments() const {
    std::vector<std::string> out;
    for (const auto &[name, e] : instruments_) {
        out.push_back(name);
    }
    return out;
}

const Povm &QuantumModel::povm(std::string_view observable) const {
    auto it = observables_.find(observable);
    if (it == observables_.end()) {
        throw LookupError("unknown observable '" + std::string(observable) + "'");
    }
    return it->second.povm;
}

const Instrument &QuantumModel::instrument(std::string_view name) const {
    auto it = instruments_.find(name);
    if (it == instruments_.end()) {
        throw LookupError("unknown instrument '" + std::string(name) + "'");
    }
    return it->second.inst;
}

const HermitianObservable *QuantumModel::hermitian(std::string_view observable) const {
    auto it = observables_.find(observable);
    if (it == observables_.end() || !it->second.hermitian) {
        return nullptr;
    }
    return &*it->second.hermitian;
}

const std::vector<Outcome> &QuantumModel::outcomes(std::string_view observable) const {
    return povm(observable).outcomes();
}

const std::string &QuantumModel::observable_of(std::string_view instrument) const {
    auto it = instruments_.find(instrument);
    if (it == instruments_.end()) {
        throw LookupError("unknown instrument '" + std::string(instrument) + "'");
    }
    return it->second.observable;
}

Distribution QuantumModel::distribution(const Context &context, std::string_view observable) const {
    return povm(observable).probabilities(density_of(context));
}

std::optional<Context> QuantumModel::update(const Context &context, std::string_view instrument_name,
                                            std::size_t outcome) const {
    const Instrument &inst = instrument(instrument_name);
    auto applied = instrument_apply(inst, outcome, density_of(context), tolerances());
    if (!applied.updated) {
        return std::nullopt;
    }
    return make_quantum_context(std::move(*applied.updated));
}

std::vector<NamedContext> QuantumModel::named_contexts() const {
    std::vector<NamedContext> out;
    for (const auto &[name, rho] : contexts_) {
        out.push_back({name, make_quantum_context(rho)});
    }
    return out;
}

std::vector<Context> QuantumModel::default_context_sample(std::uint64_t seed) const {
    std::vector<Context> out = ContextualModel::default_context_sample(seed);
    CounterRng rng(seed);
    for (int k = 0; k < 20; ++k) {
        out.push_back(make_quantum_context(DensityMatrix::pure(random_pure_state(dim_, rng))));
    }
    out.push_back(make_quantum_context(DensityMatrix::maximally_mixed(dim_)));
    return out;
}

std::optional<ChshClassMaximum> QuantumModel::chsh_class_maximum(std::uint64_t seed) const {
    ChshSearchResult r = chsh_maximize(4, seed, 8);
    return ChshClassMaximum{r.value, r.witness.describe()};
}

}  // namespace cmm

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
#include "cmm/quantum_search.h"

#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>

#include "cmm/diagnostics.h"
#include "cmm/errors.h"

namespace cmm {

namespace {

CMatrix bloch_operator(const std::array<double, 3> &n) {
    return pauli::along(n[0], n[1], n[2]);
}

std::array<double, 3> bloch(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::vector<Outcome> pm_outcomes() {
    return {{"+1", 1.0}, {"-1", -1.0}};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", std::abs(v) < 5e-7 ? 0.0 : v);
    return buf;
}

struct Layout {
    bool separable;
    std::size_t state_params() const {
        return separable ? 4 : 8;
    }
    std::size_t size() const {
        return state_params() + 8;
    }
};

ChshWitness decode(const Layout &layout, const std::vector<double> &p) {
    ChshWitness w;
    if (layout.separable) {
        auto qubit = [&](std::size_t k) {
            return std::array<Complex, 2>{Complex(std::cos(p[k] / 2)),
                                          std::polar(std::sin(p[k] / 2), p[k + 1])};
        };
        auto q1 = qubit(0);
        auto q2 = qubit(2);
        w.state = {q1[0] * q2[0], q1[0] * q2[1], q1[1] * q2[0], q1[1] * q2[1]};
    } else {
        w.state.resize(4);
        for (std::size_t k = 0; k < 4; ++k) {
            w.state[k] = Complex(p[2 * k], p[2 * k + 1]);
        }
        if (norm(w.state) < 1e-12) {
            w.state[0] = 1.0;
        }
        w.state = normalized(std::move(w.state));
    }
    std::size_t o = layout.state_params();
    for (std::size_t i = 0; i < 2; ++i) {
        w.a[i] = bloch(p[o + 2 * i], p[o + 2 * i + 1]);
        w.b[i] = bloch(p[o + 4 + 2 * i], p[o + 5 + 2 * i]);
    }
    return w;
}

ChshSearchResult climb(const Layout &layout, CounterRng rng) {
    std::vector<double> p(layout.size());
    for (std::size_t k = 0; k < layout.state_params(); ++k) {
        p[k] = layout.separable ? rng.uniform() * 2 * std::numbers::pi : rng.normal();
    }
    for (std::size_t k = layout.state_params(); k < p.size(); ++k) {
        p[k] = rng.uniform() * 2 * std::numbers::pi;
    }
    double best = decode(layout, p).value();
    double step = 0.5;
    for (int sweeps = 0; step > 1e-10 && sweeps < 100000; ++sweeps) {
        bool improved = false;
        for (std::size_t k = 0; k < p.size(); ++k) {
            for (double dir : {1.0, -1.0}) {
                double saved = p[k];
                p[k] += dir * step;
                double v = decode(layout, p).value();
                if (v > best + 1e-15) {
                    best = v;
                    improved = true;
                    break;
                }
                p[k] = saved;
            }
        }
        if (!improved) {
            step *= 0.5;
        }
    }
    return {best, decode(layout, p)};
}

}  // namespace

double ChshWitness::value() const {
    const CMatrix id = CMatrix::identity(2);
    CMatrix a1 = bloch_operator(a[0]), a2 = bloch_operator(a[1]);
    CMatrix b1 = bloch_operator(b[0]), b2 = bloch_operator(b[1]);
    CMatrix bell = kron(a1, b1 + b2) + kron(a2, b1 - b2);
    auto w = bell * std::span<const Complex>(state);
    return inner(state, w).real();
}

QuantumModel ChshWitness::model() const {
    const CMatrix id = CMatrix::identity(2);
    QuantumModel m(4);
    m.add_observable(HermitianObservable("A1", kron(bloch_operator(a[0]), id)));
    m.add_observable(HermitianObservable("A2", kron(bloch_operator(a[1]), id)));
    m.add_observable(HermitianObservable("B1", kron(id, bloch_operator(b[0]))));
    m.add_observable(HermitianObservable("B2", kron(id, bloch_operator(b[1]))));
    m.add_context("psi", DensityMatrix::pure(state));
    return m;
}

std::string ChshWitness::describe() const {
    std::string s = "psi=(";
    for (std::size_t k = 0; k < state.size(); ++k) {
        s += (k ? ", " : "") + fmt(state[k].real());
        if (std::abs(state[k].imag()) >= 5e-7) {
            s += (state[k].imag() < 0 ? "-" : "+") + fmt(std::abs(state[k].imag())) + "i";
        }
    }
    s += ")";
    auto dir = [](const char *name, const std::array<double, 3> &n) {
        return std::string(" ") + name + "=(" + fmt(n[0]) + ", " + fmt(n[1]) + ", " + fmt(n[2]) + ")";
    };
    return s + dir("A1", a[0]) + dir("A2", a[1]) + dir("B1", b[0]) + dir("B2", b[1]);
}

ChshWitness singlet_chsh_witness() {
    const double r = 1.0 / std::numbers::sqrt2;
    ChshWitness w;
    w.state = {0.0, r, -r, 0.0};
    w.a[0] = {0, 0, 1};
    w.a[1] = {1, 0, 0};
    w.b[0] = {-r, 0, -r};
    w.b[1] = {r, 0, -r};
    return w;
}

ChshSearchResult chsh_maximize(std::size_t dim, std::uint64_t seed, std::size_t restarts, bool separable_only) {
    if (dim != 4) {
        throw InputError("chsh_maximize: only the two-qubit space (dim 4) is supported");
    }
    if (restarts == 0) {
        throw InputError("chsh_maximize: restarts must be positive");
    }
    const Layout layout{separable_only};
    const CounterRng root(seed);
    std::vector<std::future<ChshSearchResult>> jobs;
    for (std::size_t r = 0; r < restarts; ++r) {
        jobs.push_back(std::async(std::launch::async, climb, layout, root.split(r)));
    }
    std::optional<ChshSearchResult> best;
    for (auto &j : jobs) {
        ChshSearchResult r = j.get();
        if (!best || r.value > best->value) {
            best = std::move(r);
        }
    }
    QuantumModel m = best->witness.model();
    best->value = chsh_value(m, m.context("psi"), {"A1", "A2"}, {"B1", "B2"}).value;
    return *best;
}

namespace {

/// Random two-outcome PVM: the first half of the columns of a Haar unitary spans outcome 0.
struct RandomPvm {
    CMatrix u;
    std::vector<CMatrix> effects;

    std::vector<Complex> column(std::size_t c) const {
        std::vector<Complex> v(u.rows());
        for (std::size_t r = 0; r < u.rows(); ++r) {
            v[r] = u(r, c);
        }
        return v;
    }

    /// Random pure state supported in the range of effect x.
    CMatrix state_in(std::size_t x, CounterRng &rng) const {
        const std::size_t half = u.rows() / 2;
        std::vector<Complex> v(u.rows());
        for (std::size_t c = x * half; c < (x + 1) * half; ++c) {
            Complex w(rng.normal(), rng.normal());
            auto col = column(c);
            for (std::size_t r = 0; r < v.size(); ++r) {
                v[r] += w * col[r];
            }
        }
        return DensityMatrix::pure(normalized(std::move(v))).matrix();
    }
};

RandomPvm random_pvm(std::size_t dim, CounterRng &rng) {
    RandomPvm p{random_unitary(dim, rng), {}};
    const std::size_t half = dim / 2;
    for (std::size_t x = 0; x < 2; ++x) {
        CMatrix e(dim, dim);
        for (std::size_t c = x * half; c < (x + 1) * half; ++c) {
            e += CMatrix::projector(p.column(c));
        }
        p.effects.push_back(e.hermitian_part());
    }
    return p;
}

Instrument random_atomic(std::size_t dim, const RandomPvm &pvm, CounterRng &rng) {
    std::vector<CMatrix> kraus;
    for (const auto &e : pvm.effects) {
        kraus.push_back(random_unitary(dim, rng) * e);
    }
    return Instrument::atomic(std::move(kraus), pm_outcomes());
}

/// Measure-and-prepare pair whose prepared states lie in the other instrument's effect ranges,
/// matched through a random bijection of the two outcomes.
std::pair<Instrument, Instrument> cross_prepared_pair(const RandomPvm &pa, const RandomPvm &pb, CounterRng &rng) {
    const bool swap = rng.uniform() < 0.5;
    std::vector<CMatrix> prep_a, prep_b;
    for (std::size_t x = 0; x < 2; ++x) {
        prep_a.push_back(pb.state_in(swap ? 1 - x : x, rng));
    }
    for (std::size_t y = 0; y < 2; ++y) {
        prep_b.push_back(pa.state_in(swap ? 1 - y : y, rng));
    }
    return {Instrument::measure_and_prepare(pa.effects, prep_a, pm_outcomes()),
            Instrument::measure_and_prepare(pb.effects, prep_b, pm_outcomes())};
}

struct Evaluation {
    double margin = 0;
    double residual = INFINITY;
    bool ok = false;
};

Evaluation evaluate(const QuantumModel &model, const Context &c) {
    Evaluation e;
    try {
        OrderEffect oe = order_effect(model, c, "A", "B");
        Check rre = rre_check(model, c, "A", "B");
        e.margin = oe.max_discrepancy;
        e.residual = rre.residual;
        e.ok = oe.present && e.margin > 1e-3 && rre.holds && rre.residual < 1e-9;
    } catch (const Error &) {
        e.ok = false;
    }
    return e;
}

}  // namespace

std::pair<Instrument, Instrument> canonical_oe_rre_pair() {
    const auto zero = basis_vector(2, 0), one = basis_vector(2, 1);
    const double r = 1.0 / std::numbers::sqrt2;
    const std::vector<Complex> plus{r, r}, minus{r, -r};
    std::vector<CMatrix> z_effects{CMatrix::projector(zero), CMatrix::projector(one)};
    std::vector<CMatrix> x_effects{CMatrix::projector(plus), CMatrix::projector(minus)};
    return {Instrument::measure_and_prepare(z_effects, x_effects, pm_outcomes()),
            Instrument::measure_and_prepare(x_effects, z_effects, pm_outcomes())};
}

QuantumModel OeRreSearchResult::model() const {
    if (!found || !instrument_a || !instrument_b || !context) {
        throw PreconditionError("no OE+RRE witness was found");
    }
    QuantumModel m(context->dim());
    m.add_instrument("A", *instrument_a);
    m.add_instrument("B", *instrument_b);
    m.add_context("witness", *context);
    return m;
}

OeRreSearchResult search_oe_rre(std::size_t dim, std::uint64_t seed, std::size_t budget, bool lueders_only) {
    if (dim != 2 && dim != 4) {
        throw InputError("search_oe_rre: dim must be 2 or 4");
    }
    CounterRng rng(seed);
    OeRreSearchResult out;
    for (std::size_t k = 0; k < budget; ++k) {
        ++out.candidates;
        QuantumModel model(dim);
        RandomPvm pa = random_pvm(dim, rng);
        RandomPvm pb = random_pvm(dim, rng);
        if (lueders_only) {
            model.add_observable(HermitianObservable("A", random_hermitian(dim, rng)));
            model.add_observable(HermitianObservable("B", random_hermitian(dim, rng)));
        } else if (k % 3 == 0) {
            auto [a, b] = cross_prepared_pair(pa, pb, rng);
            model.add_instrument("A", std::move(a));
            model.add_instrument("B", std::move(b));
        } else if (k % 3 == 1) {
            model.add_instrument("A", random_atomic(dim, pa, rng));
            model.add_instrument("B", random_atomic(dim, pb, rng));
        } else {
            auto [a, b] = cross_prepared_pair(pa, pb, rng);
            model.add_instrument("A", std::move(a));
            model.add_instrument("B", random_atomic(dim, pb, rng));
        }

        std::vector<DensityMatrix> candidates{DensityMatrix::pure(pa.column(0)), DensityMatrix::pure(pb.column(0))};
        for (int s = 0; s < 4; ++s) {
            candidates.push_back(DensityMatrix::pure(random_pure_state(dim, rng)));
        }
        Evaluation best;
        std::optional<DensityMatrix> best_rho;
        for (auto &rho : candidates) {
            Evaluation e = evaluate(model, make_quantum_context(rho));
            if (e.ok && e.margin > best.margin) {
                best = e;
                best_rho = rho;
            }
        }
        if (best_rho) {
            out.found = true;
            out.instrument_a = model.instrument("A");
            out.instrument_b = model.instrument("B");
            out.context = std::move(best_rho);
            out.oe_margin = best.margin;
            out.rre_residual = best.residual;
            return out;
        }
    }
    return out;
}

}  // namespace cmm

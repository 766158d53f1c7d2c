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
#include <numbers>

#include "cmm/diagnostics.h"
#include "cmm/errors.h"
#include "cmm/quantum.h"
#include "cmm/rng.h"
#include "models.h"
#include "oracle.h"

namespace cmm {
namespace {

using testing::ket;
using testing::pure_context;

CMatrix plus_projector() {
    return CMatrix{{0.5, 0.5}, {0.5, 0.5}};
}

CMatrix minus_projector() {
    return CMatrix{{0.5, -0.5}, {-0.5, 0.5}};
}

std::vector<Outcome> pm() {
    return {{"+1", 1}, {"-1", -1}};
}

/// Swap superoperator realizing rho -> rho^T on column-stacked vectors.
CMatrix transpose_superoperator(std::size_t n) {
    CMatrix s(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            s(j + i * n, i + j * n) = 1;
        }
    }
    return s;
}

TEST(DensityMatrix, Validation) {
    EXPECT_NO_THROW(DensityMatrix(CMatrix::diagonal({0.25, 0.75})));
    EXPECT_THROW(DensityMatrix(CMatrix::diagonal({0.5, 0.4})), InvariantError);
    EXPECT_THROW(DensityMatrix(CMatrix::diagonal({1.5, -0.5})), InvariantError);
    EXPECT_THROW(DensityMatrix(CMatrix{{0.5, 0.5}, {0, 0.5}}), InvariantError);
    try {
        DensityMatrix(CMatrix::diagonal({0.5, 0.4}));
    } catch (const InvariantError &e) {
        EXPECT_NEAR(e.residual, 0.1, 1e-12);
    }
}

TEST(Born, Examples) {
    HermitianObservable z("Z", pauli::z()), x("X", pauli::x());
    EXPECT_NEAR(born_prob(DensityMatrix::pure(ket({1, 0})), z, 0), 1.0, 1e-15);
    EXPECT_NEAR(born_prob(DensityMatrix::maximally_mixed(2), x, 0), 0.5, 1e-15);
    const double t = std::numbers::pi / 6;
    EXPECT_NEAR(born_prob(DensityMatrix::pure(ket({std::cos(t), std::sin(t)})), z, 0), 0.75, 1e-12);
    EXPECT_THROW(born_prob(DensityMatrix::maximally_mixed(2), z, 5), LookupError);
}

TEST(Born, MatchesOracleOnRandomStates) {
    CounterRng rng(77);
    for (int k = 0; k < 20; ++k) {
        auto h = random_hermitian(3, rng);
        HermitianObservable a("H", h);
        auto psi = random_pure_state(3, rng);
        auto rho = DensityMatrix::pure(psi);
        double total = 0;
        for (std::size_t x = 0; x < a.spectral().size(); ++x) {
            double p = born_prob(rho, a, x);
            EXPECT_NEAR(p, oracle::born(testing::to_oracle(a.projector(x)), oracle::pure(testing::to_oracle(psi))),
                        1e-12);
            total += p;
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(Luders, Examples) {
    HermitianObservable z("Z", pauli::z());
    auto up = luders_update(DensityMatrix::pure(ket({1, 1})), z, 0);
    EXPECT_LT(max_abs_diff(up.matrix(), CMatrix::diagonal({1, 0})), 1e-12);
    auto down = luders_update(DensityMatrix::maximally_mixed(2), z, 1);
    EXPECT_LT(max_abs_diff(down.matrix(), CMatrix::diagonal({0, 1})), 1e-12);
    auto eig = luders_update(DensityMatrix::pure(ket({0, 1})), z, 1);
    EXPECT_LT(max_abs_diff(eig.matrix(), CMatrix::diagonal({0, 1})), 1e-12);
    EXPECT_THROW(luders_update(DensityMatrix::pure(ket({1, 0})), z, 1), ConditioningError);
}

TEST(Luders, RepeatedUpdateIsAFixedPoint) {
    CounterRng rng(12);
    for (int k = 0; k < 10; ++k) {
        HermitianObservable a("A", random_hermitian(3, rng));
        auto rho = random_density_matrix(3, rng);
        for (std::size_t x = 0; x < a.spectral().size(); ++x) {
            auto once = luders_update(rho, a, x);
            auto twice = luders_update(once, a, x);
            EXPECT_LT(max_abs_diff(once.matrix(), twice.matrix()), 1e-10);
        }
    }
}

TEST(LudersInstrument, Examples) {
    auto z = luders_instrument(HermitianObservable("Z", pauli::z()));
    EXPECT_EQ(z.kind(), InstrumentKind::projection);
    ASSERT_EQ(z.operators().size(), 2u);
    EXPECT_LT(max_abs_diff(z.operators()[0], CMatrix::diagonal({1, 0})), 1e-12);
    EXPECT_LT(max_abs_diff(z.operators()[1], CMatrix::diagonal({0, 1})), 1e-12);
    auto id = luders_instrument(HermitianObservable("I", CMatrix::identity(2)));
    EXPECT_EQ(id.outcomes().size(), 1u);
    auto xx = luders_instrument(HermitianObservable("XX", kron(pauli::x(), pauli::x())));
    ASSERT_EQ(xx.operators().size(), 2u);
    for (const auto &p : xx.operators()) {
        EXPECT_NEAR(p.trace().real(), 2.0, 1e-12);
    }
}

TEST(InstrumentApply, ProjectionReproducesLueders) {
    HermitianObservable x("X", pauli::x());
    auto inst = luders_instrument(x);
    CounterRng rng(31);
    for (int k = 0; k < 5; ++k) {
        auto rho = random_density_matrix(2, rng);
        for (std::size_t o = 0; o < 2; ++o) {
            auto app = instrument_apply(inst, o, rho);
            EXPECT_NEAR(app.prob, born_prob(rho, x, o), 1e-12);
            ASSERT_TRUE(app.updated.has_value());
            EXPECT_LT(max_abs_diff(app.updated->matrix(), luders_update(rho, x, o).matrix()), 1e-12);
            EXPECT_LT(max_abs_diff(app.subnormalized, app.prob * app.updated->matrix()), 1e-12);
        }
    }
}

TEST(InstrumentApply, AtomicWithProjectorsEqualsProjection) {
    auto atomic = Instrument::atomic({CMatrix::diagonal({1, 0}), CMatrix::diagonal({0, 1})}, pm());
    auto proj = luders_instrument(HermitianObservable("Z", pauli::z()));
    CounterRng rng(32);
    auto rho = random_density_matrix(2, rng);
    for (std::size_t o = 0; o < 2; ++o) {
        EXPECT_LT(max_abs_diff(atomic.apply(o, rho.matrix()), proj.apply(o, rho.matrix())), 1e-12);
    }
}

TEST(InstrumentApply, MeasureAndPrepare) {
    auto inst = Instrument::measure_and_prepare({CMatrix::diagonal({1, 0}), CMatrix::diagonal({0, 1})},
                                                {plus_projector(), minus_projector()}, pm());
    auto app = instrument_apply(inst, 0, DensityMatrix::pure(ket({1, 0})));
    EXPECT_NEAR(app.prob, 1.0, 1e-12);
    ASSERT_TRUE(app.updated.has_value());
    EXPECT_LT(max_abs_diff(app.updated->matrix(), plus_projector()), 1e-12);
    auto null = instrument_apply(inst, 1, DensityMatrix::pure(ket({1, 0})));
    EXPECT_NEAR(null.prob, 0.0, 1e-15);
    EXPECT_FALSE(null.updated.has_value());
}

TEST(Instrument, InvalidKrausFamilyIsRejected) {
    EXPECT_THROW(Instrument::atomic({CMatrix::diagonal({1, 0}), CMatrix::diagonal({0, 0.5})}, pm()), InvariantError);
    EXPECT_THROW(Instrument::projection({CMatrix::diagonal({1, 0}), CMatrix::diagonal({1, 1})}, pm()),
                 InvariantError);
}

TEST(PovmFromInstrument, Examples) {
    auto z = povm_from_instrument(luders_instrument(HermitianObservable("Z", pauli::z())));
    EXPECT_LT(max_abs_diff(z.effects()[0], CMatrix::diagonal({1, 0})), 1e-12);

    // Unbiased noisy sigma_z with Kraus operators sqrt((I +- 0.5 Z)/2).
    CMatrix ep = CMatrix::diagonal({0.75, 0.25}), em = CMatrix::diagonal({0.25, 0.75});
    auto atomic = Instrument::atomic({psd_sqrt(ep), psd_sqrt(em)}, pm());
    auto noisy = povm_from_instrument(atomic);
    EXPECT_LT(max_abs_diff(noisy.effects()[0], ep), 1e-12);
    EXPECT_LT(max_abs_diff(noisy.effects()[1], em), 1e-12);

    auto mp = Instrument::measure_and_prepare({ep, em}, {plus_projector(), minus_projector()}, pm());
    auto mpp = povm_from_instrument(mp);
    EXPECT_LT(max_abs_diff(mpp.effects()[0], ep), 1e-12);
    EXPECT_LT(max_abs_diff(mpp.effects()[1], em), 1e-12);
}

TEST(PovmFromInstrument, GeneralizedBornConsistency) {
    CounterRng rng(44);
    auto u = random_unitary(3, rng);
    // a^2 + b^2 = I, so {u a, b} is a Kraus family.
    CMatrix a = CMatrix::diagonal({1, 0.6, 0}), b = CMatrix::diagonal({0, 0.8, 1});
    auto inst = Instrument::atomic({u * a, b}, pm());
    auto povm = povm_from_instrument(inst);
    for (int k = 0; k < 20; ++k) {
        auto rho = random_density_matrix(3, rng);
        auto probs = povm.probabilities(rho);
        double total = 0;
        for (std::size_t x = 0; x < 2; ++x) {
            EXPECT_NEAR(probs[x], inst.apply(x, rho.matrix()).trace().real(), 1e-9);
            total += inst.apply(x, rho.matrix()).trace().real();
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(PovmCompat, Examples) {
    const CMatrix id = CMatrix::identity(2);
    auto za = pvm_of(HermitianObservable("ZA", kron(pauli::z(), id)));
    auto xb = pvm_of(HermitianObservable("XB", kron(id, pauli::x())));
    std::vector<CMatrix> table;
    for (const auto &ea : za.effects()) {
        for (const auto &eb : xb.effects()) {
            table.push_back(ea * eb);
        }
    }
    auto ok = povm_compat_verify(za, xb, table);
    EXPECT_TRUE(ok.compatible);
    CounterRng rng(5);
    auto rho = random_density_matrix(4, rng);
    auto jpd = joint_born(table, 2, 2, rho);
    auto direct = conditional_jpd(testing::two_qubit_local(), make_quantum_context(rho), "ZA", "XB");
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(jpd.p[k], direct.p[k], 1e-10);
    }

    auto z = pvm_of(HermitianObservable("Z", pauli::z()));
    auto x = pvm_of(HermitianObservable("X", pauli::x()));
    std::vector<CMatrix> bad;
    for (const auto &ea : z.effects()) {
        for (const auto &eb : x.effects()) {
            bad.push_back(ea * eb);
        }
    }
    EXPECT_FALSE(povm_compat_verify(z, x, bad).compatible);

    Povm trivial({CMatrix::identity(2)}, {{"1", 1}});
    EXPECT_TRUE(povm_compat_verify(z, trivial, z.effects()).compatible);
    EXPECT_THROW(povm_compat_verify(z, x, z.effects()), InputError);
}

TEST(QuantumInterference, Examples) {
    HermitianObservable x("X", pauli::x()), z("Z", pauli::z());
    auto qi = quantum_interference(DensityMatrix::pure(ket({1, 0})), x, z, 0);
    EXPECT_TRUE(qi.pure);
    EXPECT_NEAR(qi.delta_cross_terms, 0.5, 1e-12);
    EXPECT_NEAR(qi.datum.delta, 0.5, 1e-12);
    auto mixed = quantum_interference(DensityMatrix::maximally_mixed(2), x, z, 0);
    EXPECT_NEAR(mixed.datum.delta, 0.0, 1e-12);
    const CMatrix id = CMatrix::identity(2);
    HermitianObservable za("ZA", kron(pauli::z(), id)), xb("XB", kron(id, pauli::x()));
    CounterRng rng(6);
    auto c = quantum_interference(DensityMatrix::pure(random_pure_state(4, rng)), za, xb, 0);
    EXPECT_NEAR(c.delta_cross_terms, 0.0, 1e-12);
}

TEST(QuantumInterference, CrossTermsAgreeWithDefinition) {
    CounterRng rng(91);
    for (int k = 0; k < 20; ++k) {
        HermitianObservable a("A", random_hermitian(2, rng)), b("B", random_hermitian(2, rng));
        auto rho = DensityMatrix::pure(random_pure_state(2, rng));
        for (std::size_t y = 0; y < 2; ++y) {
            auto qi = quantum_interference(rho, a, b, y);
            EXPECT_NEAR(qi.delta_cross_terms, qi.datum.delta, 1e-9);
            if (qi.delta_from_theta) {
                EXPECT_NEAR(*qi.delta_from_theta, qi.datum.delta, 1e-9);
            }
        }
    }
}

TEST(CpCheck, Examples) {
    auto proj = luders_instrument(HermitianObservable("Z", pauli::z()));
    for (bool b : cp_check(proj)) {
        EXPECT_TRUE(b);
    }
    auto transpose = Instrument::general({transpose_superoperator(2)}, {{"1", 1}});
    auto cp = cp_check(transpose);
    ASSERT_EQ(cp.size(), 1u);
    EXPECT_FALSE(cp[0]);
    auto choi = choi_matrix(transpose_superoperator(2), 2);
    EXPECT_NEAR(min_eigenvalue(choi), -1.0, 1e-12);

    auto id = Instrument::general({kraus_superoperator(CMatrix::identity(2))}, {{"1", 1}});
    EXPECT_TRUE(cp_check(id)[0]);
    auto atomic = Instrument::atomic({CMatrix::diagonal({1, 0}), CMatrix::diagonal({0, 1})}, pm());
    EXPECT_TRUE(cp_check(atomic)[0]);
}

TEST(Instrument, GeneralRejectsNonTracePreserving) {
    CMatrix half = 0.5 * kraus_superoperator(CMatrix::identity(2));
    EXPECT_THROW(Instrument::general({half}, {{"1", 1}}), InvariantError);
}

TEST(Instrument, AdjointMatchesTraceDuality) {
    CounterRng rng(60);
    auto u = random_unitary(2, rng);
    auto inst = Instrument::atomic({u * CMatrix::diagonal({1, 0}), u * CMatrix::diagonal({0, 1})}, pm());
    auto rho = random_density_matrix(2, rng).matrix();
    auto op = random_hermitian(2, rng);
    for (std::size_t x = 0; x < 2; ++x) {
        Complex lhs = trace_of_product(op, inst.apply(x, rho));
        Complex rhs = trace_of_product(inst.apply_adjoint(x, op), rho);
        EXPECT_LT(std::abs(lhs - rhs), 1e-12);
    }
}

TEST(FunctionOfObservable, Examples) {
    HermitianObservable z("Z", pauli::z());
    auto same = function_of_observable(z, [](double v) { return v; });
    EXPECT_LT(max_abs_diff(same.matrix(), pauli::z()), 1e-12);
    auto sq = function_of_observable(z, [](double v) { return v * v; });
    EXPECT_LT(max_abs_diff(sq.matrix(), CMatrix::identity(2)), 1e-12);
    auto sgn = function_of_observable(HermitianObservable("D", CMatrix::diagonal({2, -3})),
                                      [](double v) { return v > 0 ? 1.0 : -1.0; });
    EXPECT_LT(max_abs_diff(sgn.matrix(), pauli::z()), 1e-12);
}

TEST(FunctionOfObservable, Pushforward) {
    CounterRng rng(70);
    HermitianObservable a("A", random_hermitian(4, rng));
    auto f = [](double v) { return v > 0 ? 1.0 : 0.0; };
    auto fa = function_of_observable(a, f);
    for (int k = 0; k < 5; ++k) {
        auto rho = random_density_matrix(4, rng);
        for (std::size_t y = 0; y < fa.spectral().size(); ++y) {
            double expected = 0;
            for (std::size_t x = 0; x < a.spectral().size(); ++x) {
                if (std::abs(f(a.spectral().eigenvalues[x]) - fa.spectral().eigenvalues[y]) < 1e-9) {
                    expected += born_prob(rho, a, x);
                }
            }
            EXPECT_NEAR(born_prob(rho, fa, y), expected, 1e-10);
        }
    }
}

TEST(Identifiability, PauliPvmsSeparateStates) {
    HermitianObservable obs[] = {{"X", pauli::x()}, {"Y", pauli::y()}, {"Z", pauli::z()}};
    CounterRng rng(80);
    for (int k = 0; k < 20; ++k) {
        auto r1 = random_density_matrix(2, rng), r2 = random_density_matrix(2, rng);
        double best = 0;
        for (const auto &o : obs) {
            best = std::max(best, std::abs(born_prob(r1, o, 0) - born_prob(r2, o, 0)));
        }
        EXPECT_GT(best, 1e-8);
    }
}

TEST(QuantumModel, ReplicabilityAndTracePreservation) {
    auto m = testing::qubit_xz();
    EXPECT_EQ(m.backend(), "von_neumann");
    CounterRng rng(81);
    for (int k = 0; k < 10; ++k) {
        auto rho = random_density_matrix(2, rng);
        for (const auto &name : m.instruments()) {
            EXPECT_TRUE(replicability(m, make_quantum_context(rho), name).holds);
            const auto &inst = m.instrument(name);
            double total = 0;
            for (std::size_t x = 0; x < inst.outcomes().size(); ++x) {
                total += inst.apply(x, rho.matrix()).trace().real();
            }
            EXPECT_NEAR(total, 1.0, 1e-9);
        }
    }
}

TEST(QuantumModel, NonProjectionInstrumentChangesConditionalJpd) {
    QuantumModel m(2);
    m.add_observable(HermitianObservable("Z", pauli::z()));
    m.add_instrument("M", Instrument::measure_and_prepare({CMatrix::diagonal({1, 0}), CMatrix::diagonal({0, 1})},
                                                          {plus_projector(), minus_projector()}, pm()));
    EXPECT_EQ(m.backend(), "instrument");
    auto c = pure_context({1, 0});
    auto conditional = conditional_jpd(m, c, "M", "Z");
    // Joint Born table from the commuting PVM pair: P(+,+) = 1.
    EXPECT_NEAR(conditional(0, 0), 0.5, 1e-12);
    EXPECT_GT(std::abs(conditional(0, 0) - 1.0), 1e-3);
}

TEST(QuantumModel, LookupAndDuplicates) {
    auto m = testing::qubit_xz();
    EXPECT_THROW(m.povm("nope"), LookupError);
    EXPECT_THROW(m.add_observable(HermitianObservable("X", pauli::x())), InputError);
    EXPECT_THROW(m.add_context("bad", DensityMatrix::maximally_mixed(3)), ShapeError);
}

}  // namespace
}  // namespace cmm

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
#include <memory>

#include "cmm/classical.h"
#include "cmm/diagnostics.h"
#include "cmm/errors.h"
#include "cmm/lsr.h"
#include "cmm/quantum.h"
#include "cmm/rng.h"
#include "models.h"

namespace cmm {
namespace {

Context measure_context(MeasureVector mu) {
    return std::make_shared<const MeasureContext>(std::move(mu));
}

FiniteProbSpace random_space(CounterRng &rng, std::size_t n, bool with_null) {
    std::vector<double> w(n);
    double sum = 0;
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = (with_null && k == 0) ? 0.0 : rng.uniform() + 0.05;
        sum += w[k];
    }
    for (auto &x : w) {
        x /= sum;
    }
    return FiniteProbSpace::with_weights(w);
}

RandomVariable random_rv(CounterRng &rng, std::size_t n, const std::string &name) {
    std::vector<double> v(n);
    for (auto &x : v) {
        x = static_cast<double>(rng() % 3);
    }
    return RandomVariable(name, v);
}

TEST(MeasureVector, StateInvariants) {
    EXPECT_TRUE(MeasureVector({"a", "b"}, {0.25, 0.75}).is_state());
    EXPECT_FALSE(MeasureVector({"a", "b"}, {-0.25, 1.25}).is_state());
    EXPECT_FALSE(MeasureVector({"a", "b"}, {0.25, 0.25}).is_state());
    EXPECT_DOUBLE_EQ(MeasureVector({"a", "b"}, {0.25, 0.25}).mass(), 0.5);
    EXPECT_THROW(MeasureVector({"a"}, {1, 2}), ShapeError);
}

TEST(MEffect, CoefficientBound) {
    EXPECT_TRUE(MEffect({0, 0.5, 1}).is_effect());
    EXPECT_FALSE(MEffect({0, 1.5}).is_effect());
    EXPECT_DOUBLE_EQ(MEffect({1, 0})(MeasureVector({"a", "b"}, {0.3, 0.7})), 0.3);
}

TEST(MInstrument, Invariants) {
    EXPECT_THROW(MInstrument({{{1, 0}, {0, 0.5}}}, {}), InvariantError);
    EXPECT_THROW(MInstrument({{{1, -0.1}, {0, 1.1}}}, {}), InvariantError);
    EXPECT_NO_THROW(MInstrument({{{0.5, 0.5}, {0.5, 0.5}}}, {}));
}

TEST(MInstrumentApply, Examples) {
    auto uniform = MeasureVector({"1", "2", "3", "4"}, {0.25, 0.25, 0.25, 0.25});
    auto id = m_instrument_apply(identity_instrument(4), 0, uniform);
    EXPECT_DOUBLE_EQ(id.prob, 1.0);
    ASSERT_TRUE(id.updated.has_value());
    EXPECT_EQ(id.updated->values(), uniform.values());

    auto half = conditioning_instrument(RandomVariable("h", {1, 1, 0, 0}));
    // Outcomes ascend by value, so index 1 is h = 1.
    auto app = m_instrument_apply(half, 1, uniform);
    EXPECT_DOUBLE_EQ(app.prob, 0.5);
    EXPECT_EQ(app.updated->values(), (std::vector<double>{0.5, 0.5, 0, 0}));

    auto point = MeasureVector({"1", "2", "3", "4"}, {1, 0, 0, 0});
    auto null = m_instrument_apply(half, 0, point);
    EXPECT_EQ(null.prob, 0.0);
    EXPECT_FALSE(null.updated.has_value());
}

TEST(MInstrumentApply, ConditioningMatchesBayes) {
    CounterRng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_space(rng, 5, trial % 2 == 0);
        auto a = random_rv(rng, 5, "a");
        auto inst = conditioning_instrument(a);
        for (std::uint64_t bits = 1; bits < 32; ++bits) {
            Event c(bits);
            if (!(s.measure(c) > 0)) {
                continue;
            }
            auto mu = MeasureVector::conditioned(s, c);
            for (std::size_t x = 0; x < a.outcomes().size(); ++x) {
                double v = a.outcomes()[x].value;
                auto app = m_instrument_apply(inst, x, mu);
                EXPECT_NEAR(app.prob, cond_prob(s, c, a, v), 1e-12);
                if (app.prob > 1e-12) {
                    auto expected = MeasureVector::conditioned(s, context_update(s, c, a, v));
                    for (std::size_t k = 0; k < 5; ++k) {
                        EXPECT_NEAR(app.updated->values()[k], expected.values()[k], 1e-12);
                    }
                }
            }
        }
    }
}

TEST(MPovm, Examples) {
    RandomVariable a("a", {0, 1, 1, 2});
    auto effects = m_povm_from_instrument(conditioning_instrument(a));
    ASSERT_EQ(effects.size(), 3u);
    EXPECT_EQ(effects[0].coefficients(), (std::vector<double>{1, 0, 0, 0}));
    EXPECT_EQ(effects[1].coefficients(), (std::vector<double>{0, 1, 1, 0}));
    EXPECT_EQ(effects[2].coefficients(), (std::vector<double>{0, 0, 0, 1}));

    auto unit = m_povm_from_instrument(identity_instrument(3));
    ASSERT_EQ(unit.size(), 1u);
    EXPECT_EQ(unit[0].coefficients(), (std::vector<double>{1, 1, 1}));

    // Blur B (column-stochastic) followed by indicator projections D0, D1.
    RealMatrix j0 = {{0.8, 0.3}, {0, 0}};
    RealMatrix j1 = {{0, 0}, {0.2, 0.7}};
    auto blurred = m_povm_from_instrument(MInstrument({j0, j1}, {}));
    ASSERT_EQ(blurred.size(), 2u);
    EXPECT_NEAR(blurred[0].coefficients()[0], 0.8, 1e-15);
    EXPECT_NEAR(blurred[0].coefficients()[1], 0.3, 1e-15);
    for (std::size_t k = 0; k < 2; ++k) {
        double c0 = blurred[0].coefficients()[k], c1 = blurred[1].coefficients()[k];
        EXPECT_GT(c0, 0);
        EXPECT_LT(c0, 1);
        EXPECT_NEAR(c0 + c1, 1.0, 1e-15);
    }
}

TEST(MeasureModel, MatchesClassicalOnEveryTriple) {
    CounterRng rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = random_space(rng, 4, trial % 3 == 0);
        ClassicalModel cm(s, {random_rv(rng, 4, "a"), random_rv(rng, 4, "b")});
        auto mm = MeasureModel::from_classical(cm);
        EXPECT_EQ(mm.backend(), "measure_lsr");
        for (std::uint64_t bits = 1; bits < 16; ++bits) {
            Event e(bits);
            if (!(s.measure(e) > 0)) {
                continue;
            }
            auto cc = cm.make_context(e);
            auto mc = measure_context(MeasureVector::conditioned(s, e));
            for (const char *a : {"a", "b"}) {
                auto pc = prob_dist(cm, cc, a);
                auto pm = prob_dist(mm, mc, a);
                ASSERT_EQ(pc.size(), pm.size());
                for (std::size_t x = 0; x < pc.size(); ++x) {
                    EXPECT_NEAR(pc[x], pm[x], 1e-12);
                }
            }
            auto jc = conditional_jpd(cm, cc, "a", "b");
            auto jm = conditional_jpd(mm, mc, "a", "b");
            for (std::size_t k = 0; k < jc.p.size(); ++k) {
                EXPECT_NEAR(jc.p[k], jm.p[k], 1e-12);
            }
        }
    }
}

TEST(Mackey, QuantumStatesSeparated) {
    QuantumModel m(2);
    m.add_observable(HermitianObservable("X", pauli::x()));
    m.add_observable(HermitianObservable("Y", pauli::y()));
    m.add_observable(HermitianObservable("Z", pauli::z()));
    CounterRng rng(12);
    std::vector<NamedContext> contexts;
    for (int k = 0; k < 10; ++k) {
        contexts.push_back({"s" + std::to_string(k), make_quantum_context(DensityMatrix::pure(random_pure_state(2, rng)))});
    }
    auto emb = mackey_embed(m, contexts, {"X", "Y", "Z"});
    EXPECT_TRUE(emb.separated);
    EXPECT_FALSE(emb.collision.has_value());
    EXPECT_LT(emb.block_residual, 1e-12);
    EXPECT_EQ(emb.coordinates.size(), 6u);
    for (std::size_t c = 0; c < contexts.size(); ++c) {
        auto p = prob_dist(m, contexts[c].context, "Z");
        EXPECT_EQ(effect_eval(emb, "Z", 0, emb.vectors[c]), p[0]);
        EXPECT_NEAR(unit_functional(emb, "X", emb.vectors[c]), 1.0, 1e-12);
    }
}

TEST(Mackey, MixtureIsAffine) {
    auto m = testing::qubit_xz();
    CounterRng rng(13);
    auto r1 = random_density_matrix(2, rng), r2 = random_density_matrix(2, rng);
    CMatrix mid = 0.5 * (r1.matrix() + r2.matrix());
    std::vector<NamedContext> contexts = {{"r1", make_quantum_context(r1)},
                                          {"r2", make_quantum_context(r2)},
                                          {"mid", make_quantum_context(DensityMatrix(mid))}};
    auto emb = mackey_embed(m, contexts, {"X", "Z"});
    auto mix = mixture(0.5, emb.vectors[0], emb.vectors[1]);
    for (std::size_t k = 0; k < mix.size(); ++k) {
        EXPECT_NEAR(mix[k], emb.vectors[2][k], 1e-10);
    }
    double f1 = effect_eval(emb, "X", 1, emb.vectors[0]), f2 = effect_eval(emb, "X", 1, emb.vectors[1]);
    EXPECT_DOUBLE_EQ(effect_eval(emb, "X", 1, mix), 0.5 * f1 + 0.5 * f2);
    EXPECT_THROW(effect_eval(emb, "Y", 0, mix), LookupError);
}

TEST(Mackey, NullPointCollisionAndSingleContext) {
    auto s = FiniteProbSpace::with_weights({0.5, 0.0, 0.5});
    ClassicalModel cm(s, {indicator(s, 0), indicator(s, 1), indicator(s, 2)});
    std::vector<NamedContext> contexts = {{"D", cm.make_context(Event::of({0}))},
                                          {"D+null", cm.make_context(Event::of({0, 1}))}};
    auto obs = cm.observables();
    auto emb = mackey_embed(cm, contexts, obs);
    EXPECT_FALSE(emb.separated);
    ASSERT_TRUE(emb.collision.has_value());
    EXPECT_EQ(emb.collision->first, 0u);
    EXPECT_EQ(emb.collision->second, 1u);
    auto one = mackey_embed(cm, {contexts[0]}, obs);
    EXPECT_TRUE(one.separated);
}

}  // namespace
}  // namespace cmm

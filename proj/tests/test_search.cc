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
#include "cmm/quantum_search.h"

namespace cmm {
namespace {

const double kTsirelson = 2 * std::numbers::sqrt2;

TEST(ChshSearch, SingletWitnessAttainsTsirelson) {
    auto w = singlet_chsh_witness();
    EXPECT_NEAR(w.value(), kTsirelson, 1e-6);
    auto m = w.model();
    auto c = m.context("psi");
    auto v = chsh_value(m, c, {"A1", "A2"}, {"B1", "B2"});
    EXPECT_NEAR(v.value, kTsirelson, 1e-6);
}

TEST(ChshSearch, DefaultSearchReachesBound) {
    auto r = chsh_maximize(4, 2024, 8);
    EXPECT_GE(r.value, kTsirelson - 0.01);
    EXPECT_LE(r.value, kTsirelson + 1e-6);
    EXPECT_NEAR(r.witness.value(), r.value, 1e-12);
}

TEST(ChshSearch, SeparableStaysClassical) {
    auto r = chsh_maximize(4, 7, 6, true);
    EXPECT_LE(r.value, 2.0 + 1e-6);
    EXPECT_GE(r.value, 2.0 - 1e-3);
}

TEST(ChshSearch, Deterministic) {
    auto a = chsh_maximize(4, 99, 4);
    auto b = chsh_maximize(4, 99, 4);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.witness.state, b.witness.state);
}

TEST(ChshSearch, RejectsOtherDimensions) {
    EXPECT_THROW(chsh_maximize(3, 1, 1), InputError);
    EXPECT_THROW(chsh_maximize(4, 1, 0), InputError);
}

void expect_validated(const OeRreSearchResult &r) {
    ASSERT_TRUE(r.found);
    auto m = r.model();
    auto c = make_quantum_context(*r.context);
    auto names = m.instruments();
    ASSERT_EQ(names.size(), 2u);
    auto oe = order_effect(m, c, names[0], names[1]);
    EXPECT_TRUE(oe.present);
    EXPECT_GT(oe.max_discrepancy, 1e-3);
    auto rre = rre_check(m, c, names[0], names[1]);
    EXPECT_TRUE(rre.holds);
    EXPECT_LT(rre.residual, 1e-9);
}

TEST(OeRreSearch, FindsValidatedWitnesses) {
    expect_validated(search_oe_rre(2, 1, 64));
    expect_validated(search_oe_rre(4, 2, 64));
}

TEST(OeRreSearch, LuedersOnlyFindsNothing) {
    auto r = search_oe_rre(2, 3, 64, true);
    EXPECT_FALSE(r.found);
    EXPECT_GT(r.candidates, 0u);
    EXPECT_FALSE(search_oe_rre(4, 4, 32, true).found);
}

TEST(OeRreSearch, CanonicalPair) {
    auto [a, b] = canonical_oe_rre_pair();
    QuantumModel m(2);
    m.add_instrument("A", a);
    m.add_instrument("B", b);
    auto c = make_quantum_context(DensityMatrix::pure(basis_vector(2, 0)));
    auto oe = order_effect(m, c, "A", "B");
    EXPECT_NEAR(oe.max_discrepancy, 0.5, 1e-12);
    EXPECT_TRUE(rre_check(m, c, "A", "B").holds);
}

TEST(OeRreSearch, DiagonalInstrumentsShowRreWithoutOe) {
    QuantumModel m(2);
    m.add_observable(HermitianObservable("D1", CMatrix::diagonal({1, -1})));
    m.add_observable(HermitianObservable("D2", CMatrix::diagonal({2, 5})));
    m.add_context("mix", DensityMatrix(CMatrix::diagonal({0.3, 0.7})));
    auto c = m.context("mix");
    EXPECT_FALSE(order_effect(m, c, "D1", "D2").present);
    EXPECT_TRUE(rre_check(m, c, "D1", "D2").holds);
}

TEST(OeRreSearch, RejectsOtherDimensions) {
    EXPECT_THROW(search_oe_rre(3, 1, 4), InputError);
    EXPECT_THROW(OeRreSearchResult{}.model(), PreconditionError);
}

}  // namespace
}  // namespace cmm

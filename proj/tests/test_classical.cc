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

#include "cmm/classical.h"
#include "cmm/diagnostics.h"
#include "cmm/errors.h"
#include "cmm/rng.h"

namespace cmm {
namespace {

FiniteProbSpace four_points() {
    return FiniteProbSpace({"w1", "w2", "w3", "w4"}, {0.1, 0.2, 0.3, 0.4});
}

TEST(FiniteProbSpace, RejectsBadWeights) {
    EXPECT_THROW(FiniteProbSpace({"a", "b"}, {0.7, 0.2}), InvariantError);
    EXPECT_THROW(FiniteProbSpace({"a", "b", "c"}, {0.7, 0.5, -0.2}), InvariantError);
    EXPECT_THROW(FiniteProbSpace({"a", "a"}, {0.5, 0.5}), InputError);
    EXPECT_THROW(FiniteProbSpace({}, {}), InputError);
}

TEST(FiniteProbSpace, MeasureAndNullPoints) {
    auto s = FiniteProbSpace::with_weights({0.5, 0.0, 0.5});
    EXPECT_DOUBLE_EQ(s.measure(Event::of({0, 1})), 0.5);
    EXPECT_EQ(s.null_points(), Event::of({1}));
    EXPECT_EQ(s.describe(Event::of({0, 2})), "{1,3}");
}

TEST(Classical, CondProbByHand) {
    auto s = four_points();
    RandomVariable a("a", {1, 1, -1, -1});
    EXPECT_NEAR(cond_prob(s, s.all(), a, 1), 0.3, 1e-15);
    EXPECT_NEAR(cond_prob(s, Event::of({1, 2}), a, 1), 0.2 / 0.5, 1e-15);
    EXPECT_EQ(cond_prob(s, s.all(), a, 7), 0.0);
    EXPECT_THROW(cond_prob(FiniteProbSpace::with_weights({1, 0}), Event::of({1}), a, 1), ConditioningError);
}

TEST(Classical, ContextUpdateIsIntersection) {
    auto s = four_points();
    RandomVariable a("a", {1, 1, -1, -1});
    RandomVariable b("b", {1, -1, 1, -1});
    Event c = context_update(s, s.all(), a, 1);
    EXPECT_EQ(c, Event::of({0, 1}));
    EXPECT_EQ(context_update(s, c, b, -1), Event::of({1}));
    auto z = FiniteProbSpace::with_weights({1, 0});
    RandomVariable v("v", {0, 1});
    EXPECT_THROW(context_update(z, z.all(), v, 1), ConditioningError);
}

TEST(Classical, ComposeRv) {
    RandomVariable a("a", {1, 2, 3});
    auto sq = compose_rv(a, [](double x) { return x * x; });
    EXPECT_EQ(sq.values(), (std::vector<double>{1, 4, 9}));
    auto parity = compose_rv(a, std::map<double, double>{{1, 1}, {2, 0}, {3, 1}}, "parity");
    EXPECT_EQ(parity.outcomes().size(), 2u);
    EXPECT_THROW(compose_rv(a, std::map<double, double>{{1, 1}}), InputError);
}

TEST(Classical, QuotientDropsNullPoints) {
    auto s = FiniteProbSpace::with_weights({0.5, 0.0, 0.5});
    auto q = quotient_null(s);
    EXPECT_EQ(q.space().size(), 2u);
    EXPECT_TRUE(q.equivalent(Event::of({0}), Event::of({0, 1})));
    EXPECT_FALSE(q.equivalent(Event::of({0}), Event::of({2})));
    RandomVariable x("x", {1, 5, 2});
    RandomVariable y("y", {1, 9, 2});
    EXPECT_TRUE(q.equivalent(x, y));
    EXPECT_EQ(q.canonical(x).values(), (std::vector<double>{1, 2}));
    EXPECT_EQ(q.canonical(Event::of({1, 2})), Event::of({1}));
}

TEST(Classical, UniquenessNeedsQuotient) {
    auto s = FiniteProbSpace::with_weights({0.5, 0.0, 0.5});
    auto before = uniqueness_check(s);
    EXPECT_TRUE(before.observables_separated);
    EXPECT_FALSE(before.contexts_separated);
    // The zero variable agrees with the null point's indicator almost surely.
    EXPECT_FALSE(uniqueness_check(s, {RandomVariable("zero", {0, 0, 0})}).observables_separated);
    auto after = uniqueness_check(quotient_null(s).space());
    EXPECT_TRUE(after.observables_separated);
    EXPECT_TRUE(after.contexts_separated);
}

TEST(Classical, ModelMatchesDirectSums) {
    auto s = four_points();
    ClassicalModel m(s, {RandomVariable("a", {1, 1, -1, -1}), RandomVariable("b", {1, -1, 1, -1})});
    auto all = m.make_context(s.all());
    auto p = prob_dist(m, all, "a");
    ASSERT_EQ(p.size(), 2u);
    // Outcomes are sorted by value: -1 then +1.
    EXPECT_NEAR(p[0], 0.7, 1e-15);
    EXPECT_NEAR(p[1], 0.3, 1e-15);
    EXPECT_NEAR(average(m, all, "a"), 0.3 - 0.7, 1e-15);
    EXPECT_NEAR(conditional_prob(m, all, "a", 1, "b", 1), 0.1 / 0.3, 1e-15);
}

TEST(Classical, ExhaustiveChshIsTwo) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CounterRng rng(seed);
        std::vector<double> w(6);
        double sum = 0;
        for (auto &x : w) {
            x = rng.uniform() + 0.01;
            sum += x;
        }
        for (auto &x : w) {
            x /= sum;
        }
        auto s = FiniteProbSpace::with_weights(w);
        w.back() = 0;
        auto r = classical_chsh_exhaustive(s, s.all());
        EXPECT_NEAR(r.value, 2.0, 1e-12);
    }
}

TEST(Classical, ChshClassMaximumLimit) {
    ClassicalModel small(FiniteProbSpace::uniform(4), {RandomVariable("a", {1, 1, -1, -1})});
    auto m = small.chsh_class_maximum(0);
    ASSERT_TRUE(m.has_value());
    EXPECT_NEAR(m->value, 2.0, 1e-12);
    ClassicalModel big(FiniteProbSpace::uniform(13), {RandomVariable("a", std::vector<double>(13, 1.0))});
    EXPECT_FALSE(big.chsh_class_maximum(0).has_value());
}

TEST(Classical, QuotientedModel) {
    ClassicalModel m(FiniteProbSpace::with_weights({0.25, 0.0, 0.75}), {RandomVariable("a", {1, 2, 1})});
    auto q = m.quotiented();
    EXPECT_EQ(q.space().size(), 2u);
    EXPECT_EQ(q.outcomes("a").size(), 1u);
}

}  // namespace
}  // namespace cmm

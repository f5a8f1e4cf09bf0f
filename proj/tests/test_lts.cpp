// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "lpecleave/error.hpp"
#include "lpecleave/lts.hpp"
#include "support.hpp"

using namespace lpecleave;

namespace {

MultiActionValue act(const std::string& a) { return MultiActionValue({ActionValue{a, {}}}); }

// a.(b + c) versus a.b + a.c
std::pair<Lts, Lts> branching_pair() {
    LtsBuilder x;
    for (int k = 0; k < 4; ++k) {
        x.add_state();
    }
    x.add_transition(0, act("a"), 1);
    x.add_transition(1, act("b"), 2);
    x.add_transition(1, act("c"), 3);
    LtsBuilder y;
    for (int k = 0; k < 5; ++k) {
        y.add_state();
    }
    y.add_transition(0, act("a"), 1);
    y.add_transition(0, act("a"), 2);
    y.add_transition(1, act("b"), 3);
    y.add_transition(2, act("c"), 4);
    return {std::move(x).build(), std::move(y).build()};
}

} // namespace

TEST_SUITE("lts") {
    TEST_CASE("multi-actions are multisets") {
        const MultiActionValue m({ActionValue{"b", {}}, ActionValue{"a", {"1"}}, ActionValue{"b", {}}});
        CHECK(to_string(m) == "a(1)|b|b");
        CHECK(m.multiplicity(ActionValue{"b", {}}) == 2);
        CHECK(parse_multi_action("b|a(1)|b") == m);
        CHECK(to_string(MultiActionValue::tau()) == "tau");
        CHECK((act("a") + act("b")).size() == 2);
    }

    TEST_CASE("builder deduplicates transitions and validates endpoints") {
        LtsBuilder b;
        b.add_state();
        CHECK(b.add_transition(0, act("a"), 0));
        CHECK_FALSE(b.add_transition(0, act("a"), 0));
        LtsBuilder bad;
        bad.add_state();
        bad.add_transition(0, act("a"), 3);
        CHECK_THROWS_AS(std::move(bad).build(), Error);
    }

    TEST_CASE("minimisation collapses bisimilar states") {
        LtsBuilder b;
        for (int k = 0; k < 3; ++k) {
            b.add_state();
        }
        b.add_transition(0, act("a"), 1);
        b.add_transition(0, act("a"), 2);
        b.add_transition(1, act("b"), 0);
        b.add_transition(2, act("b"), 0);
        const Minimised m = minimise_bisim(std::move(b).build());
        CHECK(m.quotient.num_states() == 2);
        CHECK(m.quotient.num_transitions() == 2);
        CHECK(m.partition[1] == m.partition[2]);
        CHECK(isomorphic(minimise_bisim(m.quotient).quotient, m.quotient));
    }

    TEST_CASE("non-bisimilar systems yield a witness") {
        const auto [x, y] = branching_pair();
        const BisimResult r = check_bisim(x, y);
        CHECK_FALSE(r.bisimilar);
        REQUIRE(r.witness.size() == 2);
        CHECK(r.witness[0] == act("a"));
        CHECK(check_bisim(x, x).bisimilar);
    }

    TEST_CASE("aut round trip") {
        const auto [x, y] = branching_pair();
        std::ostringstream os;
        write_aut(y, os);
        CHECK(os.str().rfind("des (0, 4, 5)\n", 0) == 0);
        std::istringstream is(os.str());
        const Lts back = read_aut(is);
        CHECK(isomorphic(back, y));
        std::ostringstream again;
        write_aut(back, again);
        CHECK(again.str() == os.str());
    }

    TEST_CASE("aut parse errors carry the line") {
        std::istringstream header("des (0, 1, 1)\n(0,\"a\",7)\n");
        CHECK_THROWS_AS(read_aut(header), MalformedAut);
        std::istringstream garbage("hello\n");
        CHECK_THROWS_AS(read_aut(garbage), MalformedAut);
        std::istringstream count("des (0, 2, 2)\n(0,\"a\",1)\n");
        try {
            read_aut(count);
            FAIL("expected MalformedAut");
        } catch (const MalformedAut& e) {
            CHECK(e.line() >= 1);
        }
    }

    TEST_CASE("partition agrees with the naive fixpoint on a small system") {
        std::mt19937 rng(7);
        const Lts l = testing::random_lts(rng, 20, 2);
        const auto rel = testing::naive_bisimulation(l);
        const auto part = bisimulation_partition(l);
        for (StateId s = 0; s < l.num_states(); ++s) {
            for (StateId t = 0; t < l.num_states(); ++t) {
                CHECK(rel[s][t] == (part[s] == part[t]));
            }
        }
    }
}

// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "lpecleave/explore.hpp"
#include "lpecleave/invariant.hpp"
#include "support.hpp"

using namespace lpecleave;

namespace {

struct Fixture {
    SpecFile spec = parse_spec(testing::kMachine);
    const Lpe& p = *spec.init.lpe;
    Expr psi(const std::string& text) const { return parse_expr(text, spec, p); }
};

Lts explore_side(const Lpe& component, const std::vector<Value>& init, std::uint64_t nat_bound) {
    Limits limits;
    limits.nat_bound = nat_bound;
    return explore_lpe(ProcessInstance{std::make_shared<const Lpe>(component), init}, limits);
}

} // namespace

TEST_SUITE("invariant") {
    TEST_CASE("n <= 3 is an invariant of Machine") {
        Fixture f;
        const InvariantReport r = check_invariant(f.p, f.psi("n <= 3"), 16);
        CHECK(r.holds);
        CHECK(r.count == 0);
    }

    TEST_CASE("n <= 2 is violated by the toggle from n = 0, s = false") {
        Fixture f;
        const InvariantReport r = check_invariant(f.p, f.psi("n <= 2"), 16);
        CHECK_FALSE(r.holds);
        REQUIRE(r.count == 1);
        CHECK(r.violations[0].summand == 1);
        CHECK(to_string(r.violations[0]) == "summand 1 at {n=0, s=false}");
    }

    TEST_CASE("invariants must be boolean over parameters") {
        Fixture f;
        CHECK_THROWS_AS(validate_invariant(f.p, Expr::natural(3)), ValidationError);
        CHECK_THROWS_AS(validate_invariant(f.p, Expr::var("k", Sort::boolean())), ValidationError);
        CHECK_NOTHROW(validate_invariant(f.p, f.psi("n <= 3 && s == s")));
    }

    TEST_CASE("restriction strengthens the selected conditions") {
        Fixture f;
        const Lpe r = restrict_lpe(f.p, f.psi("n <= 1"), {0});
        CHECK(r.name == "Machine_psi");
        CHECK(to_string(r.summands[0].condition).find("n <= 1") != std::string::npos);
        CHECK(r.summands[1].condition == f.p.summands[1].condition);
        const Lpe u = restrict_lpe(f.p, f.psi("n <= 1"), {1}, true);
        CHECK(u.summands[1].condition != f.p.summands[1].condition);
        CHECK_THROWS_AS(restrict_lpe(f.p, f.psi("true"), {5}), IndexOutOfRange);
    }

    TEST_CASE("the naive plan becomes finite under n <= 3") {
        Fixture f;
        const CleavePlan naive = testing::naive_machine_plan(f.p);
        const Lpe w = induce_component(f.p, naive, Side::W);
        // unrestricted, the branching of the W side grows with the bound
        CHECK(explore_side(w, {Value::boolean(false)}, 8).num_transitions() <
              explore_side(w, {Value::boolean(false)}, 16).num_transitions());

        const auto [rv, rw] = restricted_components(f.p, naive, f.psi("n <= 3"));
        CHECK(rw.name == "Machine_W");
        const Lts w8 = explore_side(rw, {Value::boolean(false)}, 8);
        const Lts w16 = explore_side(rw, {Value::boolean(false)}, 16);
        CHECK(w8.num_states() == w16.num_states());
        CHECK(w8.num_transitions() == w16.num_transitions());
        const Lts v8 = explore_side(rv, {Value::natural(0)}, 8);
        CHECK(v8.num_states() == 4);

        Limits limits;
        limits.nat_bound = 16;
        const Lts comp =
            explore_composition(build_invariant_context(f.p, naive, f.psi("n <= 3"), f.spec.init.init), limits);
        CHECK(check_bisim(comp, explore_lpe(f.spec.init, limits)).bisimilar);

        const Lts upd = explore_composition(
            build_invariant_context(f.p, naive, f.psi("n <= 3"), f.spec.init.init, true), limits);
        CHECK(check_bisim(upd, explore_lpe(f.spec.init, limits)).bisimilar);
    }

    TEST_CASE("the invariant must hold initially") {
        Fixture f;
        const CleavePlan plan = auto_cleave(f.p, {"n"}, {"s"});
        CHECK_THROWS_AS(build_invariant_context(f.p, plan, f.psi("s"), f.spec.init.init), InvariantViolatedAtInit);
    }

    TEST_CASE("restriction of the refined plan keeps it bisimilar") {
        Fixture f;
        const CleavePlan plan = auto_cleave(f.p, {"n"}, {"s"});
        const Lts comp =
            explore_composition(build_invariant_context(f.p, plan, f.psi("n <= 3"), f.spec.init.init), Limits{});
        CHECK(check_bisim(comp, explore_lpe(f.spec.init, Limits{})).bisimilar);
    }
}

// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "lpecleave/cleave.hpp"
#include "lpecleave/explore.hpp"
#include "support.hpp"

using namespace lpecleave;

namespace {

struct MachineFixture {
    SpecFile spec = parse_spec(testing::kMachine);
    const Lpe& p = *spec.init.lpe;
    CleavePlan plan = auto_cleave(p, {"n"}, {"s"});
};

std::set<std::string> label_set(const Lts& l) {
    std::set<std::string> out;
    for (const auto& t : l.transitions()) {
        out.insert(to_string(l.label(t.label)));
    }
    return out;
}

} // namespace

TEST_SUITE("cleave") {
    TEST_CASE("auto_cleave on Machine yields the refined tuples") {
        MachineFixture f;
        CHECK(f.plan.v.U == IndexSet{0});
        CHECK(f.plan.w.U == IndexSet{1});
        CHECK(f.plan.v.K == IndexSet{0});
        CHECK(f.plan.w.K.empty());
        CHECK(f.plan.v.J == IndexSet{0, 1});
        CHECK(f.plan.w.J == IndexSet{1});
        CHECK(to_string(f.plan.v.c.at(1)) == "n == 0");
        CHECK(f.plan.w.c.at(1).is_true());
        CHECK(f.plan.v.alpha.at(1).is_tau());
        CHECK(to_string(f.plan.w.alpha.at(1)) == "toggle");
        REQUIRE(f.plan.v.h.at(1).size() == 1);
        CHECK(to_string(f.plan.v.h.at(1)[0]) == "s");
        CHECK(f.plan.v.h.at(1) == f.plan.w.h.at(1));
        CHECK(validate_plan(f.p, f.plan).empty());
    }

    TEST_CASE("Machine components have the expected state spaces") {
        MachineFixture f;
        const Lpe v = induce_component(f.p, f.plan, Side::V);
        const Lpe w = induce_component(f.p, f.plan, Side::W);
        CHECK(v.name == "Machine_V");
        CHECK(w.name == "Machine_W");
        const Lts lv = explore_lpe(ProcessInstance{std::make_shared<const Lpe>(v), {Value::natural(0)}}, Limits{});
        const Lts lw = explore_lpe(ProcessInstance{std::make_shared<const Lpe>(w), {Value::boolean(false)}}, Limits{});
        CHECK(lv.num_states() == 4);
        CHECK(lv.num_transitions() == 5);
        CHECK(lw.num_states() == 2);
        CHECK(lw.num_transitions() == 2);
        CHECK(label_set(lw) == std::set<std::string>{"sync1_W(false)|toggle", "sync1_W(true)|toggle"});
        CHECK(label_set(lv) ==
              std::set<std::string>{"count|tag", "sync1_V(false)", "sync1_V(true)"});
    }

    TEST_CASE("the Machine composition is bisimilar and already minimal") {
        MachineFixture f;
        const Lts mono = explore_lpe(f.spec.init, Limits{});
        const Lts comp = explore_composition(build_cleave_context(f.p, f.plan, f.spec.init.init), Limits{});
        CHECK(comp.num_states() == 6);
        CHECK(comp.num_transitions() == 6);
        const Lts min = minimise_bisim(comp).quotient;
        CHECK(min.num_states() == 6);
        CHECK(min.num_transitions() == 6);
        CHECK(check_bisim(comp, mono).bisimilar);
    }

    TEST_CASE("the tag is needed for overlapping multi-actions") {
        const SpecFile spec = parse_spec(testing::kTagCounterexample);
        const Lpe& p = *spec.init.lpe;
        CleavePlan plan = auto_cleave(p, {"x"}, {"y"});
        const Lts mono = explore_lpe(spec.init, Limits{});
        CHECK(mono.num_states() == 4);
        const Lts with_tag = explore_composition(build_cleave_context(p, plan, spec.init.init), Limits{});
        CHECK(check_bisim(with_tag, mono).bisimilar);

        plan.no_tag = true;
        const Lts without = explore_composition(build_cleave_context(p, plan, spec.init.init), Limits{});
        const BisimResult r = check_bisim(without, mono);
        CHECK_FALSE(r.bisimilar);
        REQUIRE(r.witness.size() == 1);
        CHECK(to_string(r.witness[0]) == "a|b");
    }

    TEST_CASE("oracle calibration") {
        MachineFixture f;
        const OracleReport ok = check_cleave_oracle(f.p, f.plan, 8);
        CHECK(ok.passed());
        CHECK(ok.truncated);

        CleavePlan no_payload = f.plan;
        no_payload.v.h[1].clear();
        no_payload.w.h[1].clear();
        const OracleReport r4 = check_cleave_oracle(f.p, no_payload, 8);
        CHECK(r4.r1);
        CHECK(r4.r2);
        CHECK(r4.r3_count == 0);
        CHECK(r4.r4_count > 0);

        CleavePlan blocked = f.plan;
        blocked.w.c.insert_or_assign(1, Expr::boolean(false));
        const OracleReport r3 = check_cleave_oracle(f.p, blocked, 8);
        CHECK(r3.r1);
        CHECK(r3.r2);
        CHECK(r3.r3_count > 0);
        CHECK(r3.r4_count == 0);
        CHECK(to_string(r3).find("R3 fail") != std::string::npos);
    }

    TEST_CASE("syntactic requirements") {
        MachineFixture f;
        CleavePlan wrong_alpha = f.plan;
        wrong_alpha.w.alpha[1] = MultiActionExpr{};
        const OracleReport r = check_cleave_oracle(f.p, wrong_alpha, 8);
        CHECK_FALSE(r.passed());
        CHECK(r.r1);
        CHECK(r.r2);
        CHECK(r.r3_count > 0);

        CleavePlan missing = f.plan;
        missing.w.J.clear();
        CHECK_FALSE(check_cleave_oracle(f.p, missing, 8).r1);

        // summand 0 changes only n, so it may not be independent on the W side
        CleavePlan wrong_k = f.plan;
        wrong_k.v.K.clear();
        wrong_k.w.K = {0};
        wrong_k.v.J = {0, 1};
        wrong_k.w.J = {0, 1};
        CHECK_FALSE(check_cleave_oracle(f.p, wrong_k, 8).r2);
    }

    TEST_CASE("partition problems") {
        MachineFixture f;
        CHECK_THROWS_AS(auto_cleave(f.p, {"n"}, {"x"}), PartitionInvalid);
        CHECK_THROWS_AS(auto_cleave(f.p, {"n", "s"}, {"s"}), PartitionInvalid);
        CHECK_THROWS_AS(auto_cleave(f.p, {"n"}, {}), PartitionInvalid);
        CHECK_THROWS_AS(auto_cleave(f.p, {"n", "n"}, {"s"}), PartitionInvalid);
        const auto [v, w] = resolve_partition(f.p, {"s"}, {"n"});
        CHECK(v == IndexSet{1});
        CHECK(w == IndexSet{0});
    }

    TEST_CASE("fresh names avoid declared actions") {
        const SpecFile spec = parse_spec(R"(
act tag, sync0_V;
proc P(b: Bool) = b -> tag|sync0_V . P(!b);
init P(true);
)");
        const FreshNames names = make_fresh_names(*spec.init.lpe);
        CHECK(names.tag == "tag_");
        CHECK(names.sync_v[0] == "sync0_V_");
        CHECK(names.sync_w[0] == "sync0_W");
    }

    TEST_CASE("invalid plans are rejected before induction") {
        MachineFixture f;
        CleavePlan bad = f.plan;
        bad.v.c.insert_or_assign(1, Expr::var("s", Sort::boolean()));
        bad.w.c.erase(1);
        CHECK_FALSE(validate_plan(f.p, bad).empty());
        CHECK_THROWS_AS(induce_component(f.p, bad, Side::W), ValidationError);
    }

    TEST_CASE("the plan dump lists both sides") {
        MachineFixture f;
        const std::string text = dump_plan(f.p, f.plan);
        CHECK(text.find("V = {n}") != std::string::npos);
        CHECK(text.find("  K = {0}") != std::string::npos);
        CHECK(text.find("summand 1: c = n == 0; alpha = tau; h = <s>") != std::string::npos);
    }

    TEST_CASE("the naive plan is a cleave") {
        MachineFixture f;
        const CleavePlan naive = testing::naive_machine_plan(f.p);
        CHECK(validate_plan(f.p, naive).empty());
        CHECK(check_cleave_oracle(f.p, naive, 6).passed());
    }
}

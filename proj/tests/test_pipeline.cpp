// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "lpecleave/pipeline.hpp"
#include "support.hpp"

using namespace lpecleave;

namespace {

std::string aut(const Lts& l) {
    std::ostringstream os;
    write_aut(l, os);
    return os.str();
}

} // namespace

TEST_SUITE("pipeline") {
    TEST_CASE("Machine rows") {
        const SpecFile spec = parse_spec(testing::kMachine);
        const PipelineResult r = run_pipeline(spec, {"n"}, {"s"}, PipelineOptions{});
        CHECK(r.bisim.bisimilar);
        CHECK_FALSE(r.unverified);
        CHECK(format_metrics(r.rows, TableFormat::KeyValue, false) ==
              "name=Machine states=6 transitions=6 states_min=6 transitions_min=6\n"
              "name=Machine_V states=4 transitions=5 states_min=4 transitions_min=5\n"
              "name=Machine_W states=2 transitions=2 states_min=2 transitions_min=2\n"
              "name=composition states=6 transitions=6 states_min=6 transitions_min=6\n");
        REQUIRE(r.artifacts.size() == 8);
        CHECK(r.artifacts[0].file_name == "Machine.aut");
        CHECK(r.artifacts[7].file_name == "composition.min.aut");
        for (const auto& row : r.rows) {
            CHECK(row.states_min <= row.states);
            CHECK(row.transitions_min <= row.transitions);
        }
        const std::string text = format_metrics(r.rows, TableFormat::Text, true);
        CHECK(text.find("time(s)") != std::string::npos);
    }

    TEST_CASE("repeated runs are byte-identical") {
        const SpecFile spec = parse_spec(testing::kTagCounterexample);
        const PipelineResult a = run_pipeline(spec, {"x"}, {"y"}, PipelineOptions{});
        const PipelineResult b = run_pipeline(spec, {"x"}, {"y"}, PipelineOptions{});
        REQUIRE(a.artifacts.size() == b.artifacts.size());
        for (std::size_t k = 0; k < a.artifacts.size(); ++k) {
            CHECK(aut(a.artifacts[k].lts) == aut(b.artifacts[k].lts));
        }
        CHECK(format_metrics(a.rows, TableFormat::KeyValue, false) == format_metrics(b.rows, TableFormat::KeyValue, false));
    }

    TEST_CASE("without the tag the check fails") {
        const SpecFile spec = parse_spec(testing::kTagCounterexample);
        PipelineOptions options;
        options.no_tag = true;
        const PipelineResult r = run_pipeline(spec, {"x"}, {"y"}, options);
        CHECK_FALSE(r.bisim.bisimilar);
        REQUIRE(r.bisim.witness.size() == 1);
        CHECK(to_string(r.bisim.witness[0]) == "a|b");
    }

    TEST_CASE("failing invariants abort unless forced") {
        const SpecFile spec = parse_spec(testing::kMachine);
        PipelineOptions options;
        options.invariant = "n <= 2";
        try {
            run_pipeline(spec, {"n"}, {"s"}, options);
            FAIL("expected PipelineError");
        } catch (const PipelineError& e) {
            CHECK(e.stage() == "invariant");
            CHECK(e.kind() == PipelineError::Kind::Validation);
        }
        options.invariant = "n <= 3";
        const PipelineResult r = run_pipeline(spec, {"n"}, {"s"}, options);
        CHECK(r.bisim.bisimilar);
        REQUIRE(r.invariant.has_value());
        CHECK(r.invariant->holds);
    }

    TEST_CASE("stage errors name the stage") {
        const SpecFile spec = parse_spec(testing::kMachine);
        try {
            run_pipeline(spec, {"n"}, {"q"}, PipelineOptions{});
            FAIL("expected PipelineError");
        } catch (const PipelineError& e) {
            CHECK(e.stage() == "cleave");
        }
        PipelineOptions tiny;
        tiny.limits.max_states = 3;
        try {
            run_pipeline(spec, {"n"}, {"s"}, tiny);
            FAIL("expected PipelineError");
        } catch (const PipelineError& e) {
            CHECK(e.kind() == PipelineError::Kind::Limit);
        }
    }
}

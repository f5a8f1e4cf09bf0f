// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "lpecleave/lpecleave.h"

namespace {

constexpr const char* kMachine = R"(
act count, toggle;
proc Machine(n: Nat, s: Bool) =
    n > 0 -> count . Machine(n - 1, s)
  + n == 0 -> toggle . Machine(if(!s, 3, 1), !s);
init Machine(0, false);
)";

std::string take(char* s) {
    std::string out = s == nullptr ? "" : s;
    lpc_string_free(s);
    return out;
}

} // namespace

TEST_CASE("parse errors map to LPC_ERR_PARSE") {
    lpc_spec* spec = nullptr;
    CHECK(lpc_spec_parse("act a; proc", &spec) == LPC_ERR_PARSE);
    CHECK(std::string(lpc_last_error()).find(":") != std::string::npos);
    CHECK(lpc_spec_parse(nullptr, &spec) == LPC_ERR_ARGUMENT);
    CHECK(lpc_spec_load("/nonexistent/file.spec", &spec) == LPC_ERR_IO);
}

TEST_CASE("explore, minimise and compare") {
    lpc_spec* spec = nullptr;
    REQUIRE(lpc_spec_parse(kMachine, &spec) == LPC_OK);
    CHECK(std::string(lpc_spec_init_name(spec)) == "Machine");
    lpc_limits limits;
    lpc_limits_default(&limits);
    lpc_lts* lts = nullptr;
    REQUIRE(lpc_explore(spec, &limits, &lts) == LPC_OK);
    CHECK(lpc_lts_num_states(lts) == 6);
    CHECK(lpc_lts_num_transitions(lts) == 6);
    lpc_lts* min = nullptr;
    REQUIRE(lpc_minimise(lts, &min) == LPC_OK);
    int bisimilar = 0;
    char* witness = nullptr;
    REQUIRE(lpc_compare(lts, min, &bisimilar, &witness) == LPC_OK);
    CHECK(bisimilar == 1);
    CHECK(take(witness).empty());

    const auto path = std::filesystem::temp_directory_path() / "lpecleave_capi_test.aut";
    REQUIRE(lpc_lts_write_aut(lts, path.c_str()) == LPC_OK);
    lpc_lts* back = nullptr;
    REQUIRE(lpc_lts_read_aut(path.c_str(), &back) == LPC_OK);
    CHECK(take([&] {
              char* s = nullptr;
              lpc_lts_to_aut(back, &s);
              return s;
          }()) == take([&] {
              char* s = nullptr;
              lpc_lts_to_aut(lts, &s);
              return s;
          }()));
    std::filesystem::remove(path);

    limits.max_states = 2;
    lpc_lts* partial = nullptr;
    CHECK(lpc_explore(spec, &limits, &partial) == LPC_ERR_LIMIT);
    REQUIRE(partial != nullptr);
    CHECK(lpc_lts_num_states(partial) == 2);

    lpc_lts_free(partial);
    lpc_lts_free(back);
    lpc_lts_free(min);
    lpc_lts_free(lts);
    lpc_spec_free(spec);
}

TEST_CASE("cleave and oracle") {
    lpc_spec* spec = nullptr;
    REQUIRE(lpc_spec_parse(kMachine, &spec) == LPC_OK);
    lpc_plan* plan = nullptr;
    CHECK(lpc_cleave(spec, "{\"V\": [\"n\"]}", 0, &plan) == LPC_ERR_VALIDATION);
    CHECK(lpc_cleave(spec, "{not json", 0, &plan) == LPC_ERR_PARSE);
    REQUIRE(lpc_cleave(spec, R"({"V": ["n"], "W": ["s"]})", 0, &plan) == LPC_OK);
    char* text = nullptr;
    REQUIRE(lpc_plan_dump(plan, &text) == LPC_OK);
    CHECK(take(text).find("K = {0}") != std::string::npos);
    REQUIRE(lpc_plan_component(plan, 1, &text) == LPC_OK);
    const std::string w = take(text);
    CHECK(w.find("proc Machine_W(s: Bool)") != std::string::npos);
    CHECK(w.find("init Machine_W(false);") != std::string::npos);
    CHECK(lpc_plan_component(plan, 2, &text) == LPC_ERR_ARGUMENT);
    int passed = 0;
    REQUIRE(lpc_plan_oracle(plan, 8, &passed, &text) == LPC_OK);
    CHECK(passed == 1);
    CHECK(take(text).find("R4 pass") != std::string::npos);
    lpc_plan_free(plan);

    int holds = 1;
    REQUIRE(lpc_check_invariant(spec, "n <= 2", 8, &holds, &text) == LPC_OK);
    CHECK(holds == 0);
    CHECK(take(text).find("summand 1 at {n=0, s=false}") != std::string::npos);
    CHECK(lpc_check_invariant(spec, "n <=", 8, &holds, nullptr) == LPC_ERR_PARSE);
    lpc_spec_free(spec);
}

TEST_CASE("pipeline through the C interface") {
    lpc_spec* spec = nullptr;
    REQUIRE(lpc_spec_parse(kMachine, &spec) == LPC_OK);
    lpc_pipeline_options options;
    lpc_pipeline_options_default(&options);
    options.invariant = "n <= 3";
    lpc_pipeline_result* r = nullptr;
    REQUIRE(lpc_pipeline(spec, R"({"V": ["n"], "W": ["s"]})", &options, &r) == LPC_OK);
    CHECK(lpc_pipeline_bisimilar(r) == 1);
    CHECK(lpc_pipeline_unverified(r) == 0);
    char* text = nullptr;
    REQUIRE(lpc_pipeline_table(r, LPC_TABLE_KV, 0, &text) == LPC_OK);
    CHECK(take(text).find("name=composition states=6 transitions=6") != std::string::npos);
    const auto dir = std::filesystem::temp_directory_path() / "lpecleave_capi_artifacts";
    REQUIRE(lpc_pipeline_write_artifacts(r, dir.c_str()) == LPC_OK);
    CHECK(std::filesystem::exists(dir / "Machine_V.min.aut"));
    std::filesystem::remove_all(dir);
    lpc_pipeline_result_free(r);

    options.invariant = "n <= 2";
    CHECK(lpc_pipeline(spec, R"({"V": ["n"], "W": ["s"]})", &options, &r) == LPC_ERR_VALIDATION);
    options.force = 1;
    REQUIRE(lpc_pipeline(spec, R"({"V": ["n"], "W": ["s"]})", &options, &r) == LPC_OK);
    CHECK(lpc_pipeline_unverified(r) == 1);
    lpc_pipeline_result_free(r);

    options.invariant = nullptr;
    options.force = 0;
    options.limits.max_states = 2;
    CHECK(lpc_pipeline(spec, R"({"V": ["n"], "W": ["s"]})", &options, &r) == LPC_ERR_LIMIT);
    lpc_spec_free(spec);
}

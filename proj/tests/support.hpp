// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared fixtures for the unit, property and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "lpecleave/cleave.hpp"
#include "lpecleave/lts.hpp"
#include "lpecleave/spec.hpp"

namespace lpecleave::testing {

inline constexpr const char* kMachine = R"(
act count, toggle;
proc Machine(n: Nat, s: Bool) =
    n > 0 -> count . Machine(n - 1, s)
  + n == 0 -> toggle . Machine(if(!s, 3, 1), !s);
init Machine(0, false);
)";

inline constexpr const char* kTagCounterexample = R"(
act a, b;
proc P(x: Bool, y: Bool) =
    x -> a . P(false, y)
  + y -> b . P(x, false)
  + x && !y -> a|b . P(false, false);
init P(true, true);
)";

/// Both sides take part in both Machine summands and exchange <n, s>.
CleavePlan naive_machine_plan(const Lpe& machine);

/// Pairs (s, t) of states related by the greatest bisimulation, computed by
/// the textbook fixpoint over all pairs.
std::vector<std::vector<bool>> naive_bisimulation(const Lts& l);

/// Number of classes of the relation returned by naive_bisimulation.
std::size_t naive_block_count(const Lts& l);

/// An LTS in which every state is reachable from state 0.
Lts random_lts(std::mt19937& rng, std::size_t max_states, std::size_t num_labels);

/// A random LPE with a finite state space over Bool, a three-valued
/// enumeration and Nat values up to 4, in specification syntax.
std::string random_lpe_spec(std::mt19937& rng);

/// Random nonempty split of the parameters of `p` (one side may be empty
/// when there is one parameter).
std::pair<std::vector<std::string>, std::vector<std::string>> random_partition(std::mt19937& rng, const Lpe& p);

/// One random edit of a dependent summand: drop synchronised data, weaken a
/// condition or move an action factor across sides. Returns false when the
/// plan has no dependent summand.
bool mutate_plan(std::mt19937& rng, CleavePlan& plan);

/// The whole cleave check: oracle, then compositional versus monolithic.
struct CleaveOutcome {
    bool oracle_passed = false;
    bool bisimilar = false;
    std::size_t mono_states = 0;
    std::size_t comp_states = 0;
};
/// With `always_compose` the composition is explored even when the oracle fails.
CleaveOutcome run_cleave(const SpecFile& spec, const CleavePlan& plan, std::uint64_t nat_bound,
                         bool always_compose = false);

} // namespace lpecleave::testing

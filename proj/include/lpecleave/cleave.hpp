// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Splitting an LPE into two communicating components.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lpecleave/compose.hpp"
#include "lpecleave/lpe.hpp"

namespace lpecleave {

enum class Side { V, W };

std::string to_string(Side s);

/// Parameters owned by a component, its independent summands K, the summands
/// it takes part in J, and per dependent summand its share of the condition
/// and action plus the data it synchronises on.
struct SeparationTuple {
    IndexSet U;
    IndexSet K;
    IndexSet J;
    std::map<std::size_t, Expr> c;
    std::map<std::size_t, MultiActionExpr> alpha;
    std::map<std::size_t, std::vector<Expr>> h;
};

/// Labels introduced by a cleave, indexed by summand.
struct FreshNames {
    std::vector<std::string> sync_v;
    std::vector<std::string> sync_w;
    std::vector<std::string> sync;
    std::string tag;
};

/// `sync{i}_V`, `sync{i}_W`, `sync{i}` and `tag`, each suffixed with `_` until
/// it is not an action of `p`.
FreshNames make_fresh_names(const Lpe& p);

struct CleavePlan {
    SeparationTuple v;
    SeparationTuple w;
    FreshNames names;
    /// Debug switch: leave out the tag action on independent summands.
    bool no_tag = false;

    const SeparationTuple& tuple(Side s) const { return s == Side::V ? v : w; }
    SeparationTuple& tuple(Side s) { return s == Side::V ? v : w; }
};

/// Resolves parameter names to index sets. Throws PartitionInvalid unless the
/// two lists are disjoint and together cover the parameters.
std::pair<IndexSet, IndexSet> resolve_partition(const Lpe& p, const std::vector<std::string>& v_names,
                                                const std::vector<std::string>& w_names);

/// Well-formedness of a plan: index sets, free variables of the per-summand
/// expressions and sorts. Empty iff usable by induce_component.
std::vector<std::string> validate_plan(const Lpe& p, const CleavePlan& plan);

/// The component LPE induced by one side of the plan, named `<P>_V` or
/// `<P>_W`. Throws FreshNameCollision or ValidationError.
Lpe induce_component(const Lpe& p, const CleavePlan& plan, Side side);

/// The recombination context around two component expressions.
CompositionExpr cleave_context(const Lpe& p, const CleavePlan& plan, CompositionExpr v_part, CompositionExpr w_part);

/// The context around the two induced components started in the projections
/// of `init`.
CompositionExpr build_cleave_context(const Lpe& p, const CleavePlan& plan, const std::vector<Value>& init);

/// Derives a plan from a parameter partition by free-variable analysis.
/// Throws PartitionInvalid.
CleavePlan auto_cleave(const Lpe& p, const std::vector<std::string>& v_names, const std::vector<std::string>& w_names);

/// Human-readable listing of both tuples and the fresh names.
std::string dump_plan(const Lpe& p, const CleavePlan& plan);

struct OracleReport {
    bool r1 = false;
    bool r2 = false;
    std::vector<std::string> r1_problems;
    std::vector<std::string> r2_problems;
    std::vector<std::string> r3;
    std::vector<std::string> r4;
    /// Total violation counts; the lists above are capped.
    std::size_t r3_count = 0;
    std::size_t r4_count = 0;
    /// Set when a Nat domain was cut off, so R3 and R4 hold only up to the bound.
    bool truncated = false;

    bool passed() const { return r1 && r2 && r3_count == 0 && r4_count == 0; }
};

/// Checks the four cleave requirements; R3 and R4 by enumeration over the
/// bounded data domains.
OracleReport check_cleave_oracle(const Lpe& p, const CleavePlan& plan, std::uint64_t nat_bound);

std::string to_string(const OracleReport& r);

} // namespace lpecleave

// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lpecleave/cleave.hpp"

namespace lpecleave {

struct InvariantViolation {
    std::size_t summand = 0;
    /// Variable name and printed value, parameters first.
    std::vector<std::pair<std::string, std::string>> assignment;
};

std::string to_string(const InvariantViolation& v);

struct InvariantReport {
    bool holds = true;
    /// Capped list; `count` is the total.
    std::vector<InvariantViolation> violations;
    std::size_t count = 0;
    bool truncated = false;
};

/// Throws ValidationError unless `psi` is boolean over parameters of `p` only.
void validate_invariant(const Lpe& p, const Expr& psi);

/// Checks by bounded enumeration that every enabled summand preserves `psi`.
InvariantReport check_invariant(const Lpe& p, const Expr& psi, std::uint64_t nat_bound);

/// Conjoins `psi` to the conditions of the summands in `J`. With `on_update`
/// the conjunct is `psi` with the parameters replaced by the updates.
Lpe restrict_lpe(const Lpe& p, const Expr& psi, const IndexSet& J, bool on_update = false);

/// The two components of the plan, each restricted by `psi` on the
/// synchronising summands, so foreign parameters in `psi` constrain the sum
/// variables standing in for them.
std::pair<Lpe, Lpe> restricted_components(const Lpe& p, const CleavePlan& plan, const Expr& psi, bool on_update = false);

/// The cleave context over the restricted components. Throws
/// InvariantViolatedAtInit when `psi` is false in `init`.
CompositionExpr build_invariant_context(const Lpe& p, const CleavePlan& plan, const Expr& psi,
                                        const std::vector<Value>& init, bool on_update = false);

} // namespace lpecleave

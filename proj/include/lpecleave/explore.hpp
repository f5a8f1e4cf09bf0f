// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lpecleave/lpe.hpp"
#include "lpecleave/lts.hpp"

namespace lpecleave {

struct Limits {
    std::uint64_t nat_bound = 64;
    std::size_t max_states = 10'000'000;
    std::size_t max_transitions = 100'000'000;
};

/// Raised when exploration hits a state or transition limit. Carries what
/// was built up to that point.
class LimitExceeded : public Error {
  public:
    enum class Kind { States, Transitions };

    LimitExceeded(Kind kind, Lts partial)
        : Error(kind == Kind::States ? "state limit exceeded" : "transition limit exceeded"),
          kind_(kind), partial_(std::move(partial)) {}

    Kind kind() const { return kind_; }
    const Lts& partial() const { return partial_; }

  private:
    Kind kind_;
    Lts partial_;
};

using StateVector = std::vector<Value>;

struct Step {
    MultiActionValue label;
    StateVector target;
    std::size_t summand = 0;
};

/// Evaluates a multi-action under an environment.
MultiActionValue evaluate_action(const MultiActionExpr& a, const Environment& env);

/// The single-step engine of an LPE: all outgoing transitions of one state.
/// Sum variables that do not occur in a summand are not enumerated; Nat sum
/// variables range over 0..nat_bound.
class Stepper {
  public:
    Stepper(std::shared_ptr<const Lpe> lpe, std::uint64_t nat_bound);

    /// Steps in summand order, then in enumeration order of the sum variables.
    std::vector<Step> successors(const StateVector& state) const;

    /// Whether some summand enumerates a Nat sum variable, i.e. branching was
    /// cut off at the bound.
    bool truncated() const { return truncated_; }
    const Lpe& lpe() const { return *lpe_; }
    std::string describe(const StateVector& state) const;

  private:
    struct SummandPlan {
        std::vector<Variable> sums;
        std::vector<SortEnumeration> domains;
    };

    std::shared_ptr<const Lpe> lpe_;
    std::vector<SummandPlan> plans_;
    bool truncated_ = false;
};

/// Breadth-first exploration of the reachable state space. State ids follow
/// discovery order. Throws LimitExceeded.
Lts explore_lpe(const ProcessInstance& inst, const Limits& limits);

struct StateVectorHash {
    std::size_t operator()(const StateVector& s) const;
};

std::string truncation_warning(std::uint64_t nat_bound);

} // namespace lpecleave

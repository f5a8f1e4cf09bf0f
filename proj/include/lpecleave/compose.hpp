// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Composition of processes: communication, allow, hiding and parallel
// composition over LPE instances or explicit LTSs.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lpecleave/explore.hpp"
#include "lpecleave/lpe.hpp"
#include "lpecleave/lts.hpp"

namespace lpecleave {

/// A multi-set of action names, sorted with repetition.
using ActionBag = std::vector<std::string>;

ActionBag make_bag(std::vector<std::string> names);
/// Drops data: `a(3)|b(5)` becomes [a, b].
ActionBag strip_data(const MultiActionValue& m);
ActionBag strip_data(const MultiActionExpr& a);
std::string to_string(const ActionBag& bag);

/// `a0 | ... | an -> c`.
struct CommRule {
    ActionBag lhs;
    std::string rhs;

    friend bool operator==(const CommRule&, const CommRule&) = default;
};

std::string to_string(const CommRule& r);

/// Empty iff the left-hand sides share no label and no right-hand side occurs
/// in another rule's left-hand side.
std::vector<std::string> validate_comms(const std::vector<CommRule>& rules);

/// Replaces, per rule, each group of lhs actions carrying the same data by
/// one rhs action with that data.
MultiActionValue gamma_apply(const std::vector<CommRule>& rules, const MultiActionValue& m);
/// Removes every action whose label is in `hidden`.
MultiActionValue hide_apply(const std::set<std::string>& hidden, const MultiActionValue& m);

class CompositionExpr {
  public:
    enum class Kind { Leaf, Par, Comm, Allow, Hide };

    /// A process instance explored on the fly.
    static CompositionExpr leaf(ProcessInstance inst);
    /// A pre-explored transition system.
    static CompositionExpr leaf(std::shared_ptr<const Lts> lts, std::string name);
    static CompositionExpr par(CompositionExpr left, CompositionExpr right);
    static CompositionExpr comm(std::vector<CommRule> rules, CompositionExpr child);
    static CompositionExpr allow(std::set<ActionBag> allowed, CompositionExpr child);
    static CompositionExpr hide(std::set<std::string> hidden, CompositionExpr child);

    Kind kind() const;
    const std::vector<CompositionExpr>& children() const;
    const std::vector<CommRule>& rules() const;
    const std::set<ActionBag>& allowed() const;
    const std::set<std::string>& hidden() const;

    /// Leaf accessors; the instance is empty for LTS leaves and vice versa.
    const ProcessInstance& instance() const;
    const std::shared_ptr<const Lts>& lts() const;
    const std::string& leaf_name() const;

    /// Leaves in left-to-right order.
    std::vector<const CompositionExpr*> leaves() const;

  private:
    struct Node;
    explicit CompositionExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

std::string to_string(const CompositionExpr& e);

/// Structural problems: empty allow or hide sets, invalid communications,
/// invalid leaf LPEs.
std::vector<std::string> validate_composition(const CompositionExpr& e);

/// Breadth-first exploration of a composition. Throws ValidationError for an
/// invalid expression and LimitExceeded as explore_lpe does.
Lts explore_composition(const CompositionExpr& e, const Limits& limits);

} // namespace lpecleave

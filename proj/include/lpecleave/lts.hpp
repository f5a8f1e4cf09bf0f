// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lpecleave/error.hpp"

namespace lpecleave {

using StateId = std::uint32_t;
using LabelId = std::uint32_t;

/// One action occurrence `a(d1, ..., dk)`. Data arguments are kept as closed,
/// printed terms; the printing of values is injective per sort, so two data
/// values are equal iff their printed forms are.
struct ActionValue {
    std::string label;
    std::vector<std::string> args;

    friend auto operator<=>(const ActionValue&, const ActionValue&) = default;
    friend bool operator==(const ActionValue&, const ActionValue&) = default;
};

/// A multi-set of actions in canonical form: factors sorted by label, then
/// arguments, with multiplicity represented by repetition.
class MultiActionValue {
  public:
    MultiActionValue() = default;
    explicit MultiActionValue(std::vector<ActionValue> factors);

    static MultiActionValue tau() { return {}; }

    const std::vector<ActionValue>& factors() const { return factors_; }
    bool is_tau() const { return factors_.empty(); }
    std::size_t size() const { return factors_.size(); }
    std::size_t multiplicity(const ActionValue& a) const;

    /// Multi-set sum.
    friend MultiActionValue operator+(const MultiActionValue& a, const MultiActionValue& b);

    friend auto operator<=>(const MultiActionValue&, const MultiActionValue&) = default;
    friend bool operator==(const MultiActionValue&, const MultiActionValue&) = default;

  private:
    std::vector<ActionValue> factors_;
};

/// `tau`, or factors joined by `|` with arguments in parentheses.
std::string to_string(const MultiActionValue& m);
/// Inverse of to_string. Throws Error on malformed text.
MultiActionValue parse_multi_action(std::string_view text);

struct MultiActionHash {
    std::size_t operator()(const MultiActionValue& m) const;
};

struct Transition {
    StateId src;
    LabelId label;
    StateId dst;

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// An explicit labelled transition system. Label ids index `labels()`, which
/// holds each distinct multi-action once.
class Lts {
  public:
    Lts() = default;

    std::size_t num_states() const { return num_states_; }
    StateId initial() const { return initial_; }
    const std::vector<MultiActionValue>& labels() const { return labels_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    std::size_t num_transitions() const { return transitions_.size(); }
    const MultiActionValue& label(LabelId id) const { return labels_[id]; }

    /// Optional per-state descriptions (parameter values), empty if absent.
    const std::vector<std::string>& state_names() const { return state_names_; }
    /// Diagnostics attached during construction, e.g. Nat truncation.
    const std::vector<std::string>& warnings() const { return warnings_; }
    void add_warning(std::string w);

    /// Outgoing transitions per state, in stored order.
    std::vector<std::vector<std::pair<LabelId, StateId>>> successors() const;

  private:
    friend class LtsBuilder;

    std::size_t num_states_ = 0;
    StateId initial_ = 0;
    std::vector<MultiActionValue> labels_;
    std::vector<Transition> transitions_;
    std::vector<std::string> state_names_;
    std::vector<std::string> warnings_;
};

/// Incremental construction of an Lts with label interning and transition
/// de-duplication. Insertion order is preserved.
class LtsBuilder {
  public:
    StateId add_state(std::string name = {});
    void set_initial(StateId s) { lts_.initial_ = s; }
    LabelId intern(const MultiActionValue& m);
    /// Returns false when the transition was already present.
    bool add_transition(StateId src, LabelId label, StateId dst);
    bool add_transition(StateId src, const MultiActionValue& m, StateId dst) { return add_transition(src, intern(m), dst); }
    void add_warning(std::string w) { lts_.add_warning(std::move(w)); }

    std::size_t num_states() const { return lts_.num_states_; }
    std::size_t num_transitions() const { return lts_.transitions_.size(); }

    /// Throws Error when the initial state or an endpoint is out of range.
    Lts build() &&;
    /// A copy of what has been built so far, without validation.
    Lts snapshot() const { return lts_; }

  private:
    struct TransitionHash {
        std::size_t operator()(const Transition& t) const;
    };

    Lts lts_;
    std::unordered_map<MultiActionValue, LabelId, MultiActionHash> label_ids_;
    std::unordered_set<Transition, TransitionHash> seen_;
};

struct Minimised {
    Lts quotient;
    /// Block (= quotient state) of every input state.
    std::vector<StateId> partition;
};

/// Strong-bisimulation quotient by signature refinement. Quotient states are
/// numbered in breadth-first order from the initial block; unreachable blocks
/// follow in order of their smallest member.
Minimised minimise_bisim(const Lts& l);

/// Block assignment of the coarsest strong bisimulation on `l`, with blocks
/// numbered by first occurrence.
std::vector<StateId> bisimulation_partition(const Lts& l);

struct BisimResult {
    bool bisimilar = false;
    /// On failure, a label sequence after which exactly one side can perform
    /// the last label (best effort, minimal depth).
    std::vector<MultiActionValue> witness;
};

/// Decides whether the initial states of `a` and `b` are strongly bisimilar.
BisimResult check_bisim(const Lts& a, const Lts& b);

/// Writes `des (initial, #transitions, #states)` then one `(src,"label",dst)`
/// line per transition.
void write_aut(const Lts& l, std::ostream& os);
/// Throws MalformedAut.
Lts read_aut(std::istream& is);

/// Whether `a` and `b` are equal up to a renumbering of states.
bool isomorphic(const Lts& a, const Lts& b);

} // namespace lpecleave

// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lpecleave/data.hpp"

namespace lpecleave {

using IndexSet = std::set<std::size_t>;

struct ActionFactorExpr {
    std::string label;
    std::vector<Expr> args;
};

/// A multi-action expression; the empty factor list is tau.
struct MultiActionExpr {
    std::vector<ActionFactorExpr> factors;

    bool is_tau() const { return factors.empty(); }
};

/// Concatenation `a | b`.
MultiActionExpr operator|(const MultiActionExpr& a, const MultiActionExpr& b);
std::string to_string(const MultiActionExpr& a);
VariableSet free_vars(const MultiActionExpr& a);

/// Argument sorts per action label.
using ActionTable = std::map<std::string, std::vector<Sort>>;

struct Summand {
    std::vector<Variable> sum_vars;
    Expr condition = Expr::boolean(true);
    MultiActionExpr action;
    /// One update per process parameter, positionally.
    std::vector<Expr> updates;
};

struct Lpe {
    std::string name;
    std::vector<Variable> params;
    std::vector<Summand> summands;
    ActionTable actions;

    /// The identity update vector: each parameter as a variable.
    std::vector<Expr> parameter_exprs() const;
    IndexSet all_summands() const;
    IndexSet all_params() const;
    std::optional<std::size_t> param_index(const std::string& name) const;
};

struct ProcessInstance {
    std::shared_ptr<const Lpe> lpe;
    std::vector<Value> init;
};

struct LpeViolation {
    /// Summand index, or empty for LPE-level problems.
    std::optional<std::size_t> summand;
    /// Offending variable or label, when there is one.
    std::string subject;
    std::string message;
};

/// Checks the well-formedness constraints of an LPE. The report is empty iff
/// the LPE is well-formed.
std::vector<LpeViolation> validate_lpe(const Lpe& p);
std::string to_string(const LpeViolation& v);

/// Checks that the initial vector matches the parameter sorts.
std::vector<LpeViolation> validate_instance(const ProcessInstance& inst);

/// The subvector at the given positions, ascending. Throws IndexOutOfRange.
template <class T>
std::vector<T> project(std::span<const T> v, const IndexSet& indices) {
    std::vector<T> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= v.size()) {
            throw IndexOutOfRange("projection index " + std::to_string(i) + " out of range for vector of length " +
                                  std::to_string(v.size()));
        }
        out.push_back(v[i]);
    }
    return out;
}

template <class T>
std::vector<T> project(const std::vector<T>& v, const IndexSet& indices) {
    return project(std::span<const T>(v), indices);
}

/// Indices 0..n-1 not in `s`.
IndexSet complement(const IndexSet& s, std::size_t n);

} // namespace lpecleave

// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data layer: sorts, values, expressions, substitution and evaluation.
//
// Expressions are immutable trees sharing their subterms. Every expression
// carries its sort, which is checked when the node is constructed, so an
// Expr that exists is well-sorted.

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lpecleave/error.hpp"

namespace lpecleave {

enum class SortKind : std::uint8_t { Bool, Nat, Enum };

class Sort {
  public:
    static Sort boolean();
    static Sort natural();
    /// Throws SortError when the constructor list is empty or has duplicates.
    static Sort enumeration(std::string name, std::vector<std::string> constructors);

    SortKind kind() const { return kind_; }
    /// "Bool", "Nat" or the enumeration's declared name.
    const std::string& name() const;
    /// Declared constructors of an enumeration, empty for Bool and Nat.
    const std::vector<std::string>& constructors() const;
    std::optional<std::size_t> constructor_index(std::string_view ctor) const;

    friend bool operator==(const Sort& a, const Sort& b) {
        return a.kind_ == b.kind_ && (a.kind_ != SortKind::Enum || a.name() == b.name());
    }

  private:
    struct EnumDecl {
        std::string name;
        std::vector<std::string> constructors;
    };
    Sort(SortKind kind, std::shared_ptr<const EnumDecl> decl) : kind_(kind), decl_(std::move(decl)) {}

    SortKind kind_;
    std::shared_ptr<const EnumDecl> decl_;
};

/// A semantic value. Enumeration values are constructor indices and are only
/// meaningful together with their sort.
class Value {
  public:
    Value() = default;
    static Value boolean(bool b) { return Value(SortKind::Bool, b ? 1 : 0); }
    static Value natural(std::uint64_t n) { return Value(SortKind::Nat, n); }
    static Value constructor(std::size_t index) { return Value(SortKind::Enum, index); }

    SortKind kind() const { return kind_; }
    bool as_bool() const { return raw_ != 0; }
    std::uint64_t as_nat() const { return raw_; }
    std::size_t as_index() const { return static_cast<std::size_t>(raw_); }
    std::uint64_t raw() const { return raw_; }

    friend auto operator<=>(const Value&, const Value&) = default;

  private:
    Value(SortKind kind, std::uint64_t raw) : kind_(kind), raw_(raw) {}
    SortKind kind_ = SortKind::Bool;
    std::uint64_t raw_ = 0;
};

/// Renders a value as a closed data term: `true`, `17`, or a constructor name.
std::string to_string(const Value& v, const Sort& sort);

struct Variable {
    std::string name;
    Sort sort;

    friend bool operator==(const Variable& a, const Variable& b) { return a.name == b.name && a.sort == b.sort; }
    friend bool operator<(const Variable& a, const Variable& b) {
        return a.name != b.name ? a.name < b.name : a.sort.name() < b.sort.name();
    }
};

using VariableSet = std::set<Variable>;

enum class Op : std::uint8_t {
    Var,
    Lit,
    Not,
    And,
    Or,
    Implies,
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    If,
};

class Expr {
  public:
    static Expr var(const Variable& v);
    static Expr var(std::string name, Sort sort);
    /// Throws SortError when the value does not inhabit the sort.
    static Expr literal(Value v, Sort sort);
    static Expr boolean(bool b);
    static Expr natural(std::uint64_t n);

    Op op() const;
    const Sort& sort() const;
    /// Variable name; only for Op::Var.
    const std::string& name() const;
    /// Literal value; only for Op::Lit.
    const Value& value() const;
    std::span<const Expr> args() const;

    bool is_true() const;
    bool is_false() const;

    /// Structural equality.
    friend bool operator==(const Expr& a, const Expr& b);

  private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    friend Expr make_node(Op op, Sort sort, std::vector<Expr> args);

    std::shared_ptr<const Node> node_;
};

// Smart constructors; each throws SortError on ill-sorted arguments.
Expr make_not(Expr e);
Expr make_and(Expr a, Expr b);
Expr make_or(Expr a, Expr b);
Expr make_implies(Expr a, Expr b);
Expr make_eq(Expr a, Expr b);
Expr make_lt(Expr a, Expr b);
Expr make_le(Expr a, Expr b);
Expr make_gt(Expr a, Expr b);
Expr make_ge(Expr a, Expr b);
Expr make_plus(Expr a, Expr b);
/// Truncated subtraction on Nat.
Expr make_minus(Expr a, Expr b);
Expr make_if(Expr c, Expr then_e, Expr else_e);

/// Conjunction of a list; `true` when empty.
Expr make_conjunction(std::span<const Expr> parts);
/// Top-level conjuncts, flattening nested `&&`.
std::vector<Expr> conjuncts(const Expr& e);

/// Surface syntax, parenthesised by precedence.
std::string to_string(const Expr& e);

/// A variable assignment. Stored partially; a lookup of an unbound name is an error.
class Environment {
  public:
    Environment() = default;
    Environment(std::initializer_list<std::pair<std::string, Value>> bindings);

    void bind(const std::string& name, Value v);
    const Value* find(std::string_view name) const;
    std::span<const std::pair<std::string, Value>> bindings() const { return bindings_; }

  private:
    std::vector<std::pair<std::string, Value>> bindings_;
};

/// Throws UnboundVariable, or SortError when a binding has the wrong kind.
Value evaluate(const Expr& e, const Environment& env);

using Substitution = std::map<std::string, Expr>;

/// Simultaneous replacement of variables. Throws SortError when a replacement
/// has a different sort than the variable it replaces.
Expr substitute(const Expr& e, const Substitution& m);

VariableSet free_vars(const Expr& e);
void collect_free_vars(const Expr& e, VariableSet& out);
bool is_closed(const Expr& e);

struct SortEnumeration {
    std::vector<Value> values;
    /// Set when the domain is Nat and was cut off at the bound.
    bool truncated = false;
};

SortEnumeration enumerate_sort(const Sort& s, std::uint64_t nat_bound);

/// Calls `fn` once per assignment of the variables, the last variable varying
/// fastest. Returns true when some Nat domain was truncated.
bool for_each_assignment(std::span<const Variable> vars, std::uint64_t nat_bound,
                         const std::function<void(const Environment&)>& fn);

} // namespace lpecleave

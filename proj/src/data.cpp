// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lpecleave/data.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace lpecleave {

namespace {

const std::string kBoolName = "Bool";
const std::string kNatName = "Nat";
const std::vector<std::string> kNoConstructors;

} // namespace

Sort Sort::boolean() { return Sort(SortKind::Bool, nullptr); }
Sort Sort::natural() { return Sort(SortKind::Nat, nullptr); }

Sort Sort::enumeration(std::string name, std::vector<std::string> constructors) {
    if (constructors.empty()) {
        throw SortError("enumeration '" + name + "' has no constructors");
    }
    std::unordered_set<std::string> seen;
    for (const auto& c : constructors) {
        if (!seen.insert(c).second) {
            throw SortError("enumeration '" + name + "' declares constructor '" + c + "' twice");
        }
    }
    return Sort(SortKind::Enum, std::make_shared<const EnumDecl>(EnumDecl{std::move(name), std::move(constructors)}));
}

const std::string& Sort::name() const {
    switch (kind_) {
    case SortKind::Bool: return kBoolName;
    case SortKind::Nat: return kNatName;
    case SortKind::Enum: return decl_->name;
    }
    return kBoolName;
}

const std::vector<std::string>& Sort::constructors() const {
    return kind_ == SortKind::Enum ? decl_->constructors : kNoConstructors;
}

std::optional<std::size_t> Sort::constructor_index(std::string_view ctor) const {
    const auto& cs = constructors();
    auto it = std::find(cs.begin(), cs.end(), ctor);
    if (it == cs.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - cs.begin());
}

std::string to_string(const Value& v, const Sort& sort) {
    switch (sort.kind()) {
    case SortKind::Bool: return v.as_bool() ? "true" : "false";
    case SortKind::Nat: return std::to_string(v.as_nat());
    case SortKind::Enum: {
        const auto& cs = sort.constructors();
        return v.as_index() < cs.size() ? cs[v.as_index()] : "?";
    }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Expressions

struct Expr::Node {
    Op op;
    Sort sort;
    std::string name;
    Value value;
    std::vector<Expr> args;
};

Expr make_node(Op op, Sort sort, std::vector<Expr> args) {
    return Expr(std::make_shared<const Expr::Node>(Expr::Node{op, std::move(sort), {}, {}, std::move(args)}));
}

Expr Expr::var(const Variable& v) { return var(v.name, v.sort); }

Expr Expr::var(std::string name, Sort sort) {
    return Expr(std::make_shared<const Node>(Node{Op::Var, std::move(sort), std::move(name), {}, {}}));
}

Expr Expr::literal(Value v, Sort sort) {
    if (v.kind() != sort.kind()) {
        throw SortError("literal does not inhabit sort " + sort.name());
    }
    if (sort.kind() == SortKind::Enum && v.as_index() >= sort.constructors().size()) {
        throw SortError("constructor index out of range for sort " + sort.name());
    }
    return Expr(std::make_shared<const Node>(Node{Op::Lit, std::move(sort), {}, v, {}}));
}

Expr Expr::boolean(bool b) { return literal(Value::boolean(b), Sort::boolean()); }
Expr Expr::natural(std::uint64_t n) { return literal(Value::natural(n), Sort::natural()); }

Op Expr::op() const { return node_->op; }
const Sort& Expr::sort() const { return node_->sort; }
const std::string& Expr::name() const { return node_->name; }
const Value& Expr::value() const { return node_->value; }
std::span<const Expr> Expr::args() const { return node_->args; }

bool Expr::is_true() const { return op() == Op::Lit && sort().kind() == SortKind::Bool && value().as_bool(); }
bool Expr::is_false() const { return op() == Op::Lit && sort().kind() == SortKind::Bool && !value().as_bool(); }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.op != y.op || !(x.sort == y.sort) || x.name != y.name || x.value != y.value || x.args.size() != y.args.size()) {
        return false;
    }
    return std::equal(x.args.begin(), x.args.end(), y.args.begin());
}

namespace {

void require_sort(const Expr& e, SortKind kind, const char* op) {
    if (e.sort().kind() != kind) {
        throw SortError(std::string("operand of '") + op + "' has sort " + e.sort().name());
    }
}

Expr bool_binary(Op op, const char* sym, Expr a, Expr b) {
    require_sort(a, SortKind::Bool, sym);
    require_sort(b, SortKind::Bool, sym);
    return make_node(op, Sort::boolean(), {std::move(a), std::move(b)});
}

Expr nat_relation(Op op, const char* sym, Expr a, Expr b) {
    require_sort(a, SortKind::Nat, sym);
    require_sort(b, SortKind::Nat, sym);
    return make_node(op, Sort::boolean(), {std::move(a), std::move(b)});
}

Expr nat_arith(Op op, const char* sym, Expr a, Expr b) {
    require_sort(a, SortKind::Nat, sym);
    require_sort(b, SortKind::Nat, sym);
    return make_node(op, Sort::natural(), {std::move(a), std::move(b)});
}

} // namespace

Expr make_not(Expr e) {
    require_sort(e, SortKind::Bool, "!");
    return make_node(Op::Not, Sort::boolean(), {std::move(e)});
}
Expr make_and(Expr a, Expr b) { return bool_binary(Op::And, "&&", std::move(a), std::move(b)); }
Expr make_or(Expr a, Expr b) { return bool_binary(Op::Or, "||", std::move(a), std::move(b)); }
Expr make_implies(Expr a, Expr b) { return bool_binary(Op::Implies, "=>", std::move(a), std::move(b)); }

Expr make_eq(Expr a, Expr b) {
    if (!(a.sort() == b.sort())) {
        throw SortError("'==' compares " + a.sort().name() + " with " + b.sort().name());
    }
    return make_node(Op::Eq, Sort::boolean(), {std::move(a), std::move(b)});
}
Expr make_lt(Expr a, Expr b) { return nat_relation(Op::Lt, "<", std::move(a), std::move(b)); }
Expr make_le(Expr a, Expr b) { return nat_relation(Op::Le, "<=", std::move(a), std::move(b)); }
Expr make_gt(Expr a, Expr b) { return nat_relation(Op::Gt, ">", std::move(a), std::move(b)); }
Expr make_ge(Expr a, Expr b) { return nat_relation(Op::Ge, ">=", std::move(a), std::move(b)); }
Expr make_plus(Expr a, Expr b) { return nat_arith(Op::Plus, "+", std::move(a), std::move(b)); }
Expr make_minus(Expr a, Expr b) { return nat_arith(Op::Minus, "-", std::move(a), std::move(b)); }

Expr make_if(Expr c, Expr then_e, Expr else_e) {
    require_sort(c, SortKind::Bool, "if");
    if (!(then_e.sort() == else_e.sort())) {
        throw SortError("branches of 'if' have sorts " + then_e.sort().name() + " and " + else_e.sort().name());
    }
    Sort s = then_e.sort();
    return make_node(Op::If, std::move(s), {std::move(c), std::move(then_e), std::move(else_e)});
}

Expr make_conjunction(std::span<const Expr> parts) {
    if (parts.empty()) {
        return Expr::boolean(true);
    }
    Expr result = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        result = make_and(result, parts[i]);
    }
    return result;
}

namespace {

void collect_conjuncts(const Expr& e, std::vector<Expr>& out) {
    if (e.op() == Op::And) {
        collect_conjuncts(e.args()[0], out);
        collect_conjuncts(e.args()[1], out);
    } else {
        out.push_back(e);
    }
}

} // namespace

std::vector<Expr> conjuncts(const Expr& e) {
    std::vector<Expr> out;
    collect_conjuncts(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength; higher binds tighter.
int precedence(Op op) {
    switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Eq: return 4;
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: return 5;
    case Op::Plus:
    case Op::Minus: return 6;
    case Op::Not: return 7;
    default: return 8;
    }
}

const char* symbol(Op op) {
    switch (op) {
    case Op::Implies: return "=>";
    case Op::Or: return "||";
    case Op::And: return "&&";
    case Op::Eq: return "==";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Plus: return "+";
    case Op::Minus: return "-";
    default: return "?";
    }
}

void print(const Expr& e, std::ostream& os);

void print_operand(const Expr& e, int min_prec, std::ostream& os) {
    if (precedence(e.op()) < min_prec) {
        os << '(';
        print(e, os);
        os << ')';
    } else {
        print(e, os);
    }
}

void print(const Expr& e, std::ostream& os) {
    switch (e.op()) {
    case Op::Var: os << e.name(); return;
    case Op::Lit: os << to_string(e.value(), e.sort()); return;
    case Op::Not:
        os << '!';
        print_operand(e.args()[0], precedence(Op::Not), os);
        return;
    case Op::If:
        os << "if(";
        print(e.args()[0], os);
        os << ", ";
        print(e.args()[1], os);
        os << ", ";
        print(e.args()[2], os);
        os << ')';
        return;
    default: break;
    }
    // Binary operators. `&&`, `||` and `+` are printed left-associatively,
    // `=>` right-associatively; the rest are non-associative.
    const int p = precedence(e.op());
    const bool left_assoc = e.op() == Op::And || e.op() == Op::Or || e.op() == Op::Plus || e.op() == Op::Minus;
    const bool right_assoc = e.op() == Op::Implies;
    print_operand(e.args()[0], left_assoc ? p : p + 1, os);
    os << ' ' << symbol(e.op()) << ' ';
    print_operand(e.args()[1], right_assoc ? p : p + 1, os);
}

} // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(e, os);
    return os.str();
}

// ---------------------------------------------------------------------------
// Environments and evaluation

Environment::Environment(std::initializer_list<std::pair<std::string, Value>> bindings) {
    for (const auto& [n, v] : bindings) {
        bind(n, v);
    }
}

void Environment::bind(const std::string& name, Value v) {
    for (auto& b : bindings_) {
        if (b.first == name) {
            b.second = v;
            return;
        }
    }
    bindings_.emplace_back(name, v);
}

const Value* Environment::find(std::string_view name) const {
    for (const auto& b : bindings_) {
        if (b.first == name) {
            return &b.second;
        }
    }
    return nullptr;
}

Value evaluate(const Expr& e, const Environment& env) {
    switch (e.op()) {
    case Op::Var: {
        const Value* v = env.find(e.name());
        if (v == nullptr) {
            throw UnboundVariable(e.name());
        }
        if (v->kind() != e.sort().kind()) {
            throw SortError("variable '" + e.name() + "' of sort " + e.sort().name() + " bound to a value of another sort");
        }
        return *v;
    }
    case Op::Lit: return e.value();
    case Op::Not: return Value::boolean(!evaluate(e.args()[0], env).as_bool());
    case Op::And:
        return Value::boolean(evaluate(e.args()[0], env).as_bool() && evaluate(e.args()[1], env).as_bool());
    case Op::Or:
        return Value::boolean(evaluate(e.args()[0], env).as_bool() || evaluate(e.args()[1], env).as_bool());
    case Op::Implies:
        return Value::boolean(!evaluate(e.args()[0], env).as_bool() || evaluate(e.args()[1], env).as_bool());
    case Op::Eq: return Value::boolean(evaluate(e.args()[0], env) == evaluate(e.args()[1], env));
    case Op::If:
        return evaluate(e.args()[0], env).as_bool() ? evaluate(e.args()[1], env) : evaluate(e.args()[2], env);
    default: break;
    }
    const std::uint64_t a = evaluate(e.args()[0], env).as_nat();
    const std::uint64_t b = evaluate(e.args()[1], env).as_nat();
    switch (e.op()) {
    case Op::Lt: return Value::boolean(a < b);
    case Op::Le: return Value::boolean(a <= b);
    case Op::Gt: return Value::boolean(a > b);
    case Op::Ge: return Value::boolean(a >= b);
    case Op::Plus: return Value::natural(a + b);
    case Op::Minus: return Value::natural(a > b ? a - b : 0);
    default: break;
    }
    throw Error("evaluate: unknown operator");
}

Expr substitute(const Expr& e, const Substitution& m) {
    switch (e.op()) {
    case Op::Var: {
        auto it = m.find(e.name());
        if (it == m.end()) {
            return e;
        }
        if (!(it->second.sort() == e.sort())) {
            throw SortError("cannot replace '" + e.name() + "' of sort " + e.sort().name() + " by an expression of sort " +
                            it->second.sort().name());
        }
        return it->second;
    }
    case Op::Lit: return e;
    default: break;
    }
    std::vector<Expr> args;
    args.reserve(e.args().size());
    bool changed = false;
    for (const auto& a : e.args()) {
        args.push_back(substitute(a, m));
        changed = changed || !(args.back() == a);
    }
    if (!changed) {
        return e;
    }
    return make_node(e.op(), e.sort(), std::move(args));
}

void collect_free_vars(const Expr& e, VariableSet& out) {
    if (e.op() == Op::Var) {
        out.insert(Variable{e.name(), e.sort()});
        return;
    }
    for (const auto& a : e.args()) {
        collect_free_vars(a, out);
    }
}

VariableSet free_vars(const Expr& e) {
    VariableSet out;
    collect_free_vars(e, out);
    return out;
}

bool is_closed(const Expr& e) {
    if (e.op() == Op::Var) {
        return false;
    }
    return std::all_of(e.args().begin(), e.args().end(), [](const Expr& a) { return is_closed(a); });
}

SortEnumeration enumerate_sort(const Sort& s, std::uint64_t nat_bound) {
    SortEnumeration out;
    switch (s.kind()) {
    case SortKind::Bool: out.values = {Value::boolean(false), Value::boolean(true)}; break;
    case SortKind::Nat:
        out.values.reserve(nat_bound + 1);
        for (std::uint64_t n = 0; n <= nat_bound; ++n) {
            out.values.push_back(Value::natural(n));
        }
        out.truncated = true;
        break;
    case SortKind::Enum:
        for (std::size_t i = 0; i < s.constructors().size(); ++i) {
            out.values.push_back(Value::constructor(i));
        }
        break;
    }
    return out;
}

bool for_each_assignment(std::span<const Variable> vars, std::uint64_t nat_bound,
                         const std::function<void(const Environment&)>& fn) {
    std::vector<SortEnumeration> domains;
    bool truncated = false;
    for (const auto& v : vars) {
        domains.push_back(enumerate_sort(v.sort, nat_bound));
        truncated = truncated || domains.back().truncated;
    }
    Environment env;
    std::vector<std::size_t> digit(vars.size(), 0);
    for (std::size_t k = 0; k < vars.size(); ++k) {
        env.bind(vars[k].name, domains[k].values[0]);
    }
    while (true) {
        fn(env);
        std::size_t k = vars.size();
        while (k > 0) {
            --k;
            if (++digit[k] < domains[k].values.size()) {
                env.bind(vars[k].name, domains[k].values[digit[k]]);
                break;
            }
            digit[k] = 0;
            env.bind(vars[k].name, domains[k].values[0]);
            if (k == 0) {
                return truncated;
            }
        }
        if (vars.empty()) {
            return truncated;
        }
    }
}

} // namespace lpecleave

// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lpecleave/spec.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lpecleave {

std::shared_ptr<const Lpe> SpecFile::find_proc(std::string_view name) const {
    for (const auto& p : procs) {
        if (p->name == name) {
            return p;
        }
    }
    return nullptr;
}

const CompositionExpr* SpecFile::find_composition(std::string_view name) const {
    for (const auto& [n, e] : compositions) {
        if (n == name) {
            return &e;
        }
    }
    return nullptr;
}

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceLocation loc;
};

std::vector<Token> tokenize(std::string_view src) {
    static const char* const kTwoChar[] = {"->", "=>", "==", "!=", "<=", ">=", "||", "&&"};
    std::vector<Token> out;
    SourceLocation loc;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++loc.line;
                loc.column = 1;
            } else {
                ++loc.column;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        Token t;
        t.loc = loc;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\'')) {
                ++j;
            }
            t.kind = Tok::Ident;
            t.text = std::string(src.substr(i, j - i));
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                ++j;
            }
            t.kind = Tok::Number;
            t.text = std::string(src.substr(i, j - i));
        } else {
            t.kind = Tok::Symbol;
            t.text = std::string(1, c);
            for (const char* two : kTwoChar) {
                if (src.substr(i, 2) == two) {
                    t.text = two;
                }
            }
            if (t.text.size() == 1 && std::string_view("(){},;:.|+-!<>=#").find(c) == std::string_view::npos) {
                throw ParseError(loc, std::string("unexpected character '") + c + "'");
            }
        }
        out.push_back(t);
        advance(t.text.size());
    }
    Token end;
    end.loc = loc;
    out.push_back(end);
    return out;
}

const std::set<std::string>& keywords() {
    static const std::set<std::string> k = {"sort", "struct", "act",   "proc", "init", "comp", "sum", "tau",
                                            "true", "false",  "if",    "hide", "allow", "comm", "delta"};
    return k;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    // Expression mode for a standalone expression over a fixed scope.
    Parser(std::string_view text, const SpecFile& spec, const Lpe& p) : toks_(tokenize(text)) {
        sorts_ = spec.sorts;
        for (const auto& s : sorts_) {
            register_constructors(s, toks_.front().loc);
        }
        scope_ = p.params;
    }

    SpecFile parse_file() {
        SpecFile out;
        bool have_init = false;
        while (peek().kind != Tok::End) {
            const Token t = peek();
            if (accept("sort")) {
                parse_sort();
            } else if (accept("act")) {
                parse_act();
            } else if (accept("proc")) {
                out.procs.push_back(parse_proc());
            } else if (accept("init")) {
                if (have_init) {
                    throw ParseError(t.loc, "more than one init");
                }
                have_init = true;
                out.init = parse_instance(out.procs);
                expect(";");
            } else if (accept("comp")) {
                const Token name = expect_ident();
                expect("=");
                for (const auto& [n, e] : out.compositions) {
                    if (n == name.text) {
                        throw NameResolutionError(name.loc, "composition '" + name.text + "' defined twice");
                    }
                }
                out.compositions.emplace_back(name.text, parse_comp(out.procs));
                expect(";");
            } else {
                throw ParseError(t.loc, "expected sort, act, proc, init or comp, found '" + describe(t) + "'");
            }
        }
        if (out.procs.empty()) {
            throw ParseError(peek().loc, "no proc declared");
        }
        if (!have_init) {
            throw ParseError(peek().loc, "missing init");
        }
        out.sorts = sorts_;
        out.actions = actions_;
        return out;
    }

    Expr parse_standalone() {
        Expr e = parse_expr();
        if (peek().kind != Tok::End) {
            throw ParseError(peek().loc, "unexpected '" + describe(peek()) + "' after expression");
        }
        return e;
    }

  private:
    // -----------------------------------------------------------------------
    // Token helpers

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

    static std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : t.text; }

    bool is(const char* text, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind != Tok::End && t.kind != Tok::Number && t.text == text;
    }

    bool accept(const char* text) {
        if (is(text)) {
            ++pos_;
            return true;
        }
        return false;
    }

    Token expect(const char* text) {
        if (!is(text)) {
            throw ParseError(peek().loc, std::string("expected '") + text + "', found '" + describe(peek()) + "'");
        }
        return toks_[pos_++];
    }

    Token expect_ident() {
        const Token& t = peek();
        if (t.kind != Tok::Ident || keywords().contains(t.text)) {
            throw ParseError(t.loc, "expected a name, found '" + describe(t) + "'");
        }
        ++pos_;
        return t;
    }

    // -----------------------------------------------------------------------
    // Declarations

    void register_constructors(const Sort& s, SourceLocation loc) {
        for (std::size_t k = 0; k < s.constructors().size(); ++k) {
            const auto& c = s.constructors()[k];
            if (constructors_.contains(c)) {
                throw NameResolutionError(loc, "constructor '" + c + "' declared twice");
            }
            constructors_.emplace(c, Expr::literal(Value::constructor(k), s));
        }
    }

    void parse_sort() {
        const Token name = expect_ident();
        if (name.text == "Bool" || name.text == "Nat" || find_sort(name.text)) {
            throw NameResolutionError(name.loc, "sort '" + name.text + "' declared twice");
        }
        expect("=");
        expect("struct");
        std::vector<std::string> ctors;
        do {
            ctors.push_back(expect_ident().text);
        } while (accept("|"));
        expect(";");
        Sort s = [&] {
            try {
                return Sort::enumeration(name.text, ctors);
            } catch (const SortError& e) {
                throw SpecSortError(name.loc, e.what());
            }
        }();
        register_constructors(s, name.loc);
        sorts_.push_back(s);
    }

    const Sort* find_sort(const std::string& name) const {
        for (const auto& s : sorts_) {
            if (s.name() == name) {
                return &s;
            }
        }
        return nullptr;
    }

    Sort parse_sort_ref() {
        const Token t = expect_ident();
        if (t.text == "Bool") {
            return Sort::boolean();
        }
        if (t.text == "Nat") {
            return Sort::natural();
        }
        if (const Sort* s = find_sort(t.text)) {
            return *s;
        }
        throw NameResolutionError(t.loc, "unknown sort '" + t.text + "'");
    }

    void parse_act() {
        std::vector<Token> names;
        do {
            names.push_back(expect_ident());
        } while (accept(","));
        std::vector<Sort> sorts;
        if (accept(":")) {
            do {
                sorts.push_back(parse_sort_ref());
            } while (accept("#"));
        }
        expect(";");
        for (const auto& n : names) {
            if (!actions_.emplace(n.text, sorts).second) {
                throw NameResolutionError(n.loc, "action '" + n.text + "' declared twice");
            }
        }
    }

    std::vector<Variable> parse_var_decls(const char* terminator) {
        std::vector<Variable> out;
        if (is(terminator)) {
            return out;
        }
        do {
            const Token n = expect_ident();
            expect(":");
            out.push_back(Variable{n.text, parse_sort_ref()});
            if (constructors_.contains(n.text)) {
                throw NameResolutionError(n.loc, "'" + n.text + "' is a constructor name");
            }
        } while (accept(","));
        return out;
    }

    std::shared_ptr<const Lpe> parse_proc() {
        const Token name = expect_ident();
        auto p = std::make_shared<Lpe>();
        p->name = name.text;
        p->actions = actions_;
        expect("(");
        p->params = parse_var_decls(")");
        expect(")");
        expect("=");
        if (!accept("delta")) {
            do {
                p->summands.push_back(parse_summand(*p));
            } while (accept("+"));
        }
        expect(";");
        for (const auto& v : validate_lpe(*p)) {
            throw SpecSortError(name.loc, p->name + ": " + to_string(v));
        }
        return p;
    }

    Summand parse_summand(const Lpe& p) {
        Summand s;
        const SourceLocation start = peek().loc;
        if (accept("sum")) {
            s.sum_vars = parse_var_decls(".");
            expect(".");
        }
        for (const auto& v : s.sum_vars) {
            if (p.param_index(v.name)) {
                throw NameResolutionError(start, "sum variable '" + v.name + "' shadows a parameter");
            }
        }
        scope_ = p.params;
        scope_.insert(scope_.end(), s.sum_vars.begin(), s.sum_vars.end());
        const SourceLocation cond_loc = peek().loc;
        s.condition = parse_expr();
        if (s.condition.sort().kind() != SortKind::Bool) {
            throw SpecSortError(cond_loc, "condition is not boolean");
        }
        expect("->");
        s.action = parse_multi_action();
        expect(".");
        const Token call = expect_ident();
        if (call.text != p.name) {
            throw NameResolutionError(call.loc, "recursion must call '" + p.name + "', not '" + call.text + "'");
        }
        s.updates = parse_args();
        if (s.updates.size() != p.params.size()) {
            throw ParseError(call.loc, "expected " + std::to_string(p.params.size()) + " updates, found " +
                                           std::to_string(s.updates.size()));
        }
        for (std::size_t k = 0; k < s.updates.size(); ++k) {
            if (!(s.updates[k].sort() == p.params[k].sort)) {
                throw SpecSortError(call.loc, "update of '" + p.params[k].name + "' has sort " + s.updates[k].sort().name());
            }
        }
        scope_.clear();
        return s;
    }

    std::vector<Expr> parse_args() {
        std::vector<Expr> out;
        expect("(");
        if (accept(")")) {
            return out;
        }
        do {
            out.push_back(parse_expr());
        } while (accept(","));
        expect(")");
        return out;
    }

    MultiActionExpr parse_multi_action() {
        MultiActionExpr m;
        if (accept("tau")) {
            return m;
        }
        do {
            const Token name = expect_ident();
            auto decl = actions_.find(name.text);
            if (decl == actions_.end()) {
                throw NameResolutionError(name.loc, "action '" + name.text + "' is not declared");
            }
            ActionFactorExpr f{name.text, {}};
            if (is("(")) {
                f.args = parse_args();
            }
            if (f.args.size() != decl->second.size()) {
                throw SpecSortError(name.loc, "action '" + name.text + "' expects " + std::to_string(decl->second.size()) +
                                                  " arguments");
            }
            for (std::size_t k = 0; k < f.args.size(); ++k) {
                if (!(f.args[k].sort() == decl->second[k])) {
                    throw SpecSortError(name.loc, "argument " + std::to_string(k + 1) + " of '" + name.text +
                                                      "' has sort " + f.args[k].sort().name() + ", expected " +
                                                      decl->second[k].name());
                }
            }
            m.factors.push_back(std::move(f));
        } while (accept("|"));
        return m;
    }

    ProcessInstance parse_instance(const std::vector<std::shared_ptr<const Lpe>>& procs) {
        const Token name = expect_ident();
        std::shared_ptr<const Lpe> lpe;
        for (const auto& p : procs) {
            if (p->name == name.text) {
                lpe = p;
            }
        }
        if (!lpe) {
            throw NameResolutionError(name.loc, "unknown process '" + name.text + "'");
        }
        scope_.clear();
        const auto args = parse_args();
        if (args.size() != lpe->params.size()) {
            throw ParseError(name.loc, "expected " + std::to_string(lpe->params.size()) + " initial values, found " +
                                           std::to_string(args.size()));
        }
        ProcessInstance inst{lpe, {}};
        for (std::size_t k = 0; k < args.size(); ++k) {
            if (!(args[k].sort() == lpe->params[k].sort)) {
                throw SpecSortError(name.loc, "initial value of '" + lpe->params[k].name + "' has sort " +
                                                  args[k].sort().name());
            }
            inst.init.push_back(evaluate(args[k], Environment{}));
        }
        return inst;
    }

    // -----------------------------------------------------------------------
    // Compositions

    CompositionExpr parse_comp(const std::vector<std::shared_ptr<const Lpe>>& procs) {
        CompositionExpr e = parse_comp_unary(procs);
        while (accept("||")) {
            e = CompositionExpr::par(std::move(e), parse_comp_unary(procs));
        }
        return e;
    }

    CompositionExpr parse_comp_unary(const std::vector<std::shared_ptr<const Lpe>>& procs) {
        if (accept("(")) {
            CompositionExpr e = parse_comp(procs);
            expect(")");
            return e;
        }
        if (accept("hide")) {
            expect("(");
            expect("{");
            std::set<std::string> names;
            if (!is("}")) {
                do {
                    names.insert(expect_ident().text);
                } while (accept(","));
            }
            expect("}");
            expect(",");
            CompositionExpr child = parse_comp(procs);
            expect(")");
            return CompositionExpr::hide(std::move(names), std::move(child));
        }
        if (accept("allow")) {
            expect("(");
            expect("{");
            std::set<ActionBag> bags;
            if (!is("}")) {
                do {
                    bags.insert(parse_bag());
                } while (accept(","));
            }
            expect("}");
            expect(",");
            CompositionExpr child = parse_comp(procs);
            expect(")");
            return CompositionExpr::allow(std::move(bags), std::move(child));
        }
        if (accept("comm")) {
            expect("(");
            expect("{");
            std::vector<CommRule> rules;
            if (!is("}")) {
                do {
                    CommRule r;
                    do {
                        r.lhs.push_back(expect_ident().text);
                    } while (accept("|"));
                    expect("->");
                    r.rhs = expect_ident().text;
                    rules.push_back(std::move(r));
                } while (accept(","));
            }
            expect("}");
            expect(",");
            CompositionExpr child = parse_comp(procs);
            expect(")");
            return CompositionExpr::comm(std::move(rules), std::move(child));
        }
        return CompositionExpr::leaf(parse_instance(procs));
    }

    ActionBag parse_bag() {
        if (accept("tau")) {
            return {};
        }
        std::vector<std::string> names;
        do {
            names.push_back(expect_ident().text);
        } while (accept("|"));
        return make_bag(std::move(names));
    }

    // -----------------------------------------------------------------------
    // Expressions

    template <class F>
    Expr build(const Token& at, F&& f) {
        try {
            return f();
        } catch (const SortError& e) {
            throw SpecSortError(at.loc, e.what());
        }
    }

    Expr parse_expr() {
        Expr lhs = parse_or();
        if (is("=>")) {
            const Token op = toks_[pos_++];
            Expr rhs = parse_expr();
            return build(op, [&] { return make_implies(lhs, rhs); });
        }
        return lhs;
    }

    Expr parse_or() {
        Expr e = parse_and();
        while (is("||")) {
            const Token op = toks_[pos_++];
            Expr rhs = parse_and();
            e = build(op, [&] { return make_or(e, rhs); });
        }
        return e;
    }

    Expr parse_and() {
        Expr e = parse_eq();
        while (is("&&")) {
            const Token op = toks_[pos_++];
            Expr rhs = parse_eq();
            e = build(op, [&] { return make_and(e, rhs); });
        }
        return e;
    }

    Expr parse_eq() {
        Expr e = parse_rel();
        while (is("==") || is("!=")) {
            const Token op = toks_[pos_++];
            Expr rhs = parse_rel();
            e = build(op, [&] { return op.text == "==" ? make_eq(e, rhs) : make_not(make_eq(e, rhs)); });
        }
        return e;
    }

    Expr parse_rel() {
        Expr e = parse_add();
        for (const char* sym : {"<", "<=", ">", ">="}) {
            if (!is(sym)) {
                continue;
            }
            const Token op = toks_[pos_++];
            Expr rhs = parse_add();
            return build(op, [&] {
                if (op.text == "<") {
                    return make_lt(e, rhs);
                }
                if (op.text == "<=") {
                    return make_le(e, rhs);
                }
                if (op.text == ">") {
                    return make_gt(e, rhs);
                }
                return make_ge(e, rhs);
            });
        }
        return e;
    }

    Expr parse_add() {
        Expr e = parse_unary();
        while (is("+") || is("-")) {
            const Token op = toks_[pos_++];
            Expr rhs = parse_unary();
            e = build(op, [&] { return op.text == "+" ? make_plus(e, rhs) : make_minus(e, rhs); });
        }
        return e;
    }

    Expr parse_unary() {
        if (is("!")) {
            const Token op = toks_[pos_++];
            Expr arg = parse_unary();
            return build(op, [&] { return make_not(arg); });
        }
        return parse_primary();
    }

    Expr parse_primary() {
        const Token t = peek();
        if (t.kind == Tok::Number) {
            ++pos_;
            try {
                return Expr::natural(std::stoull(t.text));
            } catch (const std::out_of_range&) {
                throw ParseError(t.loc, "number out of range");
            }
        }
        if (accept("(")) {
            Expr e = parse_expr();
            expect(")");
            return e;
        }
        if (accept("true")) {
            return Expr::boolean(true);
        }
        if (accept("false")) {
            return Expr::boolean(false);
        }
        if (accept("if")) {
            expect("(");
            Expr c = parse_expr();
            expect(",");
            Expr a = parse_expr();
            expect(",");
            Expr b = parse_expr();
            expect(")");
            return build(t, [&] { return make_if(c, a, b); });
        }
        if (t.kind == Tok::Ident && !keywords().contains(t.text)) {
            ++pos_;
            for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
                if (it->name == t.text) {
                    return Expr::var(*it);
                }
            }
            auto c = constructors_.find(t.text);
            if (c != constructors_.end()) {
                return c->second;
            }
            throw NameResolutionError(t.loc, "unknown name '" + t.text + "'");
        }
        throw ParseError(t.loc, "expected an expression, found '" + describe(t) + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<Sort> sorts_;
    std::map<std::string, Expr> constructors_;
    ActionTable actions_;
    std::vector<Variable> scope_;
};

} // namespace

SpecFile parse_spec(std::string_view text) { return Parser(text).parse_file(); }

SpecFile load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

Expr parse_expr(std::string_view text, const SpecFile& spec, const Lpe& p) {
    return Parser(text, spec, p).parse_standalone();
}

namespace {

void collect_sorts(const Sort& s, std::vector<Sort>& out) {
    if (s.kind() != SortKind::Enum) {
        return;
    }
    for (const auto& t : out) {
        if (t == s) {
            return;
        }
    }
    out.push_back(s);
}

std::string decls(const std::vector<Variable>& vars) {
    std::string out;
    for (std::size_t k = 0; k < vars.size(); ++k) {
        out += (k > 0 ? ", " : "") + vars[k].name + ": " + vars[k].sort.name();
    }
    return out;
}

} // namespace

std::string print_lpe(const Lpe& p, const std::vector<Value>* init) {
    std::vector<Sort> sorts;
    for (const auto& v : p.params) {
        collect_sorts(v.sort, sorts);
    }
    for (const auto& [label, args] : p.actions) {
        for (const auto& s : args) {
            collect_sorts(s, sorts);
        }
    }
    for (const auto& s : p.summands) {
        for (const auto& v : s.sum_vars) {
            collect_sorts(v.sort, sorts);
        }
    }
    std::ostringstream os;
    for (const auto& s : sorts) {
        os << "sort " << s.name() << " = struct ";
        for (std::size_t k = 0; k < s.constructors().size(); ++k) {
            os << (k > 0 ? " | " : "") << s.constructors()[k];
        }
        os << ";\n";
    }
    for (const auto& [label, args] : p.actions) {
        os << "act " << label;
        for (std::size_t k = 0; k < args.size(); ++k) {
            os << (k == 0 ? " : " : " # ") << args[k].name();
        }
        os << ";\n";
    }
    os << "\nproc " << p.name << "(" << decls(p.params) << ") =";
    if (p.summands.empty()) {
        os << " delta";
    }
    for (std::size_t i = 0; i < p.summands.size(); ++i) {
        const auto& s = p.summands[i];
        os << "\n  " << (i == 0 ? "  " : "+ ");
        if (!s.sum_vars.empty()) {
            os << "sum " << decls(s.sum_vars) << " . ";
        }
        os << to_string(s.condition) << " -> " << to_string(s.action) << " . " << p.name << "(";
        for (std::size_t k = 0; k < s.updates.size(); ++k) {
            os << (k > 0 ? ", " : "") << to_string(s.updates[k]);
        }
        os << ")";
    }
    os << ";\n";
    if (init != nullptr) {
        os << "\ninit " << p.name << "(";
        for (std::size_t k = 0; k < init->size(); ++k) {
            os << (k > 0 ? ", " : "") << to_string((*init)[k], p.params[k].sort);
        }
        os << ");\n";
    }
    return os.str();
}

} // namespace lpecleave

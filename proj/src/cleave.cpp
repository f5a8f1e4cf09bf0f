// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lpecleave/cleave.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "lpecleave/explore.hpp"

namespace lpecleave {

std::string to_string(Side s) { return s == Side::V ? "V" : "W"; }

namespace {

constexpr std::size_t kReportCap = 20;

std::string set_text(const IndexSet& s) {
    std::string out = "{";
    for (std::size_t i : s) {
        out += (out.size() > 1 ? ", " : "") + std::to_string(i);
    }
    return out + "}";
}

VariableSet vars_of(std::span<const Expr> exprs) {
    VariableSet out;
    for (const auto& e : exprs) {
        collect_free_vars(e, out);
    }
    return out;
}

void add_all(VariableSet& into, const VariableSet& from) { into.insert(from.begin(), from.end()); }

bool is_sum_var(const Summand& s, const Variable& v) {
    return std::find(s.sum_vars.begin(), s.sum_vars.end(), v) != s.sum_vars.end();
}

// Whether every variable is a sum variable of `s` or a parameter with index in `allowed`.
bool within(const Lpe& p, const Summand& s, const VariableSet& vars, const IndexSet& allowed) {
    for (const auto& v : vars) {
        if (is_sum_var(s, v)) {
            continue;
        }
        auto k = p.param_index(v.name);
        if (!k || !allowed.contains(*k) || !(p.params[*k].sort == v.sort)) {
            return false;
        }
    }
    return true;
}

// Parameter indices among `vars`.
IndexSet params_among(const Lpe& p, const VariableSet& vars) {
    IndexSet out;
    for (const auto& v : vars) {
        if (auto k = p.param_index(v.name)) {
            out.insert(*k);
        }
    }
    return out;
}

bool keeps(const Summand& s, const Lpe& p, const IndexSet& indices) {
    for (std::size_t k : indices) {
        if (!(s.updates[k] == Expr::var(p.params[k]))) {
            return false;
        }
    }
    return true;
}

std::string fresh(const Lpe& p, std::string name) {
    while (p.actions.contains(name)) {
        name += "_";
    }
    return name;
}

} // namespace

FreshNames make_fresh_names(const Lpe& p) {
    FreshNames out;
    for (std::size_t i = 0; i < p.summands.size(); ++i) {
        const std::string base = "sync" + std::to_string(i);
        out.sync_v.push_back(fresh(p, base + "_V"));
        out.sync_w.push_back(fresh(p, base + "_W"));
        out.sync.push_back(fresh(p, base));
    }
    out.tag = fresh(p, "tag");
    return out;
}

std::pair<IndexSet, IndexSet> resolve_partition(const Lpe& p, const std::vector<std::string>& v_names,
                                                const std::vector<std::string>& w_names) {
    auto resolve = [&](const std::vector<std::string>& names, const char* side) {
        IndexSet out;
        for (const auto& n : names) {
            auto k = p.param_index(n);
            if (!k) {
                throw PartitionInvalid(std::string("unknown parameter '") + n + "' in " + side);
            }
            if (!out.insert(*k).second) {
                throw PartitionInvalid(std::string("parameter '") + n + "' listed twice in " + side);
            }
        }
        return out;
    };
    IndexSet v = resolve(v_names, "V");
    IndexSet w = resolve(w_names, "W");
    for (std::size_t k = 0; k < p.params.size(); ++k) {
        const bool in_v = v.contains(k);
        const bool in_w = w.contains(k);
        if (in_v && in_w) {
            throw PartitionInvalid("parameter '" + p.params[k].name + "' is in both V and W");
        }
        if (!in_v && !in_w) {
            throw PartitionInvalid("parameter '" + p.params[k].name + "' is in neither V nor W");
        }
    }
    return {v, w};
}

std::vector<std::string> validate_plan(const Lpe& p, const CleavePlan& plan) {
    std::vector<std::string> out;
    const std::size_t n = p.summands.size();
    for (std::size_t k = 0; k < p.params.size(); ++k) {
        if (plan.v.U.contains(k) == plan.w.U.contains(k)) {
            out.push_back("parameter " + std::to_string(k) + " is not owned by exactly one side");
        }
    }
    if (plan.names.sync_v.size() < n || plan.names.sync_w.size() < n || plan.names.sync.size() < n ||
        plan.names.tag.empty()) {
        out.push_back("fresh name table is incomplete");
    }
    for (Side side : {Side::V, Side::W}) {
        const auto& t = plan.tuple(side);
        const std::string tag = to_string(side) + ": ";
        for (std::size_t k : t.U) {
            if (k >= p.params.size()) {
                out.push_back(tag + "parameter index " + std::to_string(k) + " out of range");
            }
        }
        if (!std::includes(t.J.begin(), t.J.end(), t.K.begin(), t.K.end())) {
            out.push_back(tag + "K is not a subset of J");
        }
        for (std::size_t i : t.J) {
            if (i >= n) {
                out.push_back(tag + "summand index " + std::to_string(i) + " out of range");
                continue;
            }
            const auto& s = p.summands[i];
            const std::string where = tag + "summand " + std::to_string(i) + ": ";
            if (t.K.contains(i)) {
                VariableSet fv = free_vars(s.condition);
                add_all(fv, free_vars(s.action));
                add_all(fv, vars_of(project(s.updates, t.U)));
                if (!within(p, s, fv, t.U)) {
                    out.push_back(where + "independent summand refers to parameters of the other side");
                }
                continue;
            }
            auto c = t.c.find(i);
            auto a = t.alpha.find(i);
            auto h = t.h.find(i);
            if (c == t.c.end() || a == t.alpha.end() || h == t.h.end()) {
                out.push_back(where + "missing condition, action or synchronisation data");
                continue;
            }
            if (c->second.sort().kind() != SortKind::Bool) {
                out.push_back(where + "condition is not boolean");
            }
            VariableSet fv = free_vars(c->second);
            add_all(fv, free_vars(a->second));
            add_all(fv, vars_of(h->second));
            if (!within(p, s, fv, p.all_params())) {
                out.push_back(where + "refers to variables outside the parameters and sum variables");
            }
            for (const auto& f : a->second.factors) {
                auto decl = p.actions.find(f.label);
                if (decl == p.actions.end() || decl->second.size() != f.args.size()) {
                    out.push_back(where + "action '" + f.label + "' is undeclared or has the wrong arity");
                }
            }
        }
    }
    return out;
}

namespace {

void check_fresh(const Lpe& p, const CleavePlan& plan) {
    std::set<std::string> used;
    for (const auto& [label, sorts] : p.actions) {
        used.insert(label);
    }
    for (const auto& s : p.summands) {
        for (const auto& f : s.action.factors) {
            used.insert(f.label);
        }
    }
    auto check = [&](const std::string& name) {
        if (used.contains(name)) {
            throw FreshNameCollision("label '" + name + "' is not fresh");
        }
    };
    for (std::size_t i = 0; i < p.summands.size(); ++i) {
        check(plan.names.sync_v[i]);
        check(plan.names.sync_w[i]);
        check(plan.names.sync[i]);
    }
    check(plan.names.tag);
}

} // namespace

Lpe induce_component(const Lpe& p, const CleavePlan& plan, Side side) {
    const auto problems = validate_plan(p, plan);
    if (!problems.empty()) {
        throw ValidationError("invalid cleave plan: " + problems.front());
    }
    check_fresh(p, plan);
    const auto& t = plan.tuple(side);
    const auto& sync_names = side == Side::V ? plan.names.sync_v : plan.names.sync_w;
    const auto foreign = project(p.params, complement(t.U, p.params.size()));

    Lpe out;
    out.name = p.name + "_" + to_string(side);
    out.params = project(p.params, t.U);
    out.actions = p.actions;
    if (!t.K.empty() && !plan.no_tag) {
        out.actions[plan.names.tag] = {};
    }
    for (std::size_t i : t.J) {
        const auto& s = p.summands[i];
        Summand c;
        c.updates = project(s.updates, t.U);
        c.sum_vars = s.sum_vars;
        if (t.K.contains(i)) {
            c.condition = s.condition;
            c.action = s.action;
            if (!plan.no_tag) {
                c.action.factors.push_back(ActionFactorExpr{plan.names.tag, {}});
            }
        } else {
            c.sum_vars.insert(c.sum_vars.end(), foreign.begin(), foreign.end());
            c.condition = t.c.at(i);
            c.action = t.alpha.at(i);
            const auto& h = t.h.at(i);
            std::vector<Sort> sorts;
            for (const auto& e : h) {
                sorts.push_back(e.sort());
            }
            out.actions[sync_names[i]] = sorts;
            c.action.factors.push_back(ActionFactorExpr{sync_names[i], h});
        }
        out.summands.push_back(std::move(c));
    }
    return out;
}

CompositionExpr cleave_context(const Lpe& p, const CleavePlan& plan, CompositionExpr v_part, CompositionExpr w_part) {
    CompositionExpr e = CompositionExpr::par(std::move(v_part), std::move(w_part));
    if (p.summands.empty()) {
        return e;
    }
    std::vector<CommRule> rules;
    std::set<std::string> syncs;
    std::set<ActionBag> allowed;
    for (std::size_t i = 0; i < p.summands.size(); ++i) {
        rules.push_back(CommRule{make_bag({plan.names.sync_v[i], plan.names.sync_w[i]}), plan.names.sync[i]});
        syncs.insert(plan.names.sync[i]);
        allowed.insert(strip_data(p.summands[i].action));
    }
    if (!plan.no_tag) {
        IndexSet independent = plan.v.K;
        independent.insert(plan.w.K.begin(), plan.w.K.end());
        for (std::size_t i : independent) {
            auto bag = strip_data(p.summands[i].action);
            bag.push_back(plan.names.tag);
            allowed.insert(make_bag(std::move(bag)));
        }
    }
    e = CompositionExpr::comm(std::move(rules), std::move(e));
    e = CompositionExpr::hide(std::move(syncs), std::move(e));
    e = CompositionExpr::allow(std::move(allowed), std::move(e));
    return CompositionExpr::hide({plan.names.tag}, std::move(e));
}

CompositionExpr build_cleave_context(const Lpe& p, const CleavePlan& plan, const std::vector<Value>& init) {
    auto v = std::make_shared<const Lpe>(induce_component(p, plan, Side::V));
    auto w = std::make_shared<const Lpe>(induce_component(p, plan, Side::W));
    return cleave_context(p, plan, CompositionExpr::leaf(ProcessInstance{v, project(init, plan.v.U)}),
                          CompositionExpr::leaf(ProcessInstance{w, project(init, plan.w.U)}));
}

CleavePlan auto_cleave(const Lpe& p, const std::vector<std::string>& v_names, const std::vector<std::string>& w_names) {
    auto [vset, wset] = resolve_partition(p, v_names, w_names);
    CleavePlan plan;
    plan.v.U = vset;
    plan.w.U = wset;
    plan.names = make_fresh_names(p);

    for (std::size_t i = 0; i < p.summands.size(); ++i) {
        const auto& s = p.summands[i];
        VariableSet base = free_vars(s.condition);
        add_all(base, free_vars(s.action));
        auto qualifies = [&](const IndexSet& own, const IndexSet& other) {
            VariableSet fv = base;
            add_all(fv, vars_of(project(s.updates, own)));
            return within(p, s, fv, own) && keeps(s, p, other);
        };
        if (qualifies(vset, wset)) {
            plan.v.K.insert(i);
        } else if (qualifies(wset, vset)) {
            plan.w.K.insert(i);
        }
    }
    plan.v.J = complement(plan.w.K, p.summands.size());
    plan.w.J = complement(plan.v.K, p.summands.size());

    for (std::size_t i = 0; i < p.summands.size(); ++i) {
        if (plan.v.K.contains(i) || plan.w.K.contains(i)) {
            continue;
        }
        const auto& s = p.summands[i];
        std::vector<Expr> cond_v;
        std::vector<Expr> cond_w;
        MultiActionExpr act_v;
        MultiActionExpr act_w;
        for (const auto& conj : conjuncts(s.condition)) {
            const VariableSet fv = free_vars(conj);
            if (!within(p, s, fv, vset) && within(p, s, fv, wset)) {
                cond_w.push_back(conj);
            } else {
                cond_v.push_back(conj);
            }
        }
        for (const auto& f : s.action.factors) {
            const VariableSet fv = vars_of(f.args);
            bool to_w = false;
            if (fv.empty()) {
                to_w = cond_w.size() + act_w.factors.size() < cond_v.size() + act_v.factors.size();
            } else {
                to_w = !within(p, s, fv, vset) && within(p, s, fv, wset);
            }
            (to_w ? act_w : act_v).factors.push_back(f);
        }
        const Expr c_v = make_conjunction(cond_v);
        const Expr c_w = make_conjunction(cond_w);

        VariableSet side_v = free_vars(c_v);
        add_all(side_v, free_vars(act_v));
        add_all(side_v, vars_of(project(s.updates, vset)));
        VariableSet side_w = free_vars(c_w);
        add_all(side_w, free_vars(act_w));
        add_all(side_w, vars_of(project(s.updates, wset)));

        IndexSet shared;
        for (std::size_t k : params_among(p, side_v)) {
            if (wset.contains(k)) {
                shared.insert(k);
            }
        }
        for (std::size_t k : params_among(p, side_w)) {
            if (vset.contains(k)) {
                shared.insert(k);
            }
        }
        std::vector<Expr> h;
        for (std::size_t k : shared) {
            h.push_back(Expr::var(p.params[k]));
        }
        for (const auto& e : s.sum_vars) {
            if (side_v.contains(e) && side_w.contains(e)) {
                h.push_back(Expr::var(e));
            }
        }
        plan.v.c.emplace(i, c_v);
        plan.w.c.emplace(i, c_w);
        plan.v.alpha.emplace(i, act_v);
        plan.w.alpha.emplace(i, act_w);
        plan.v.h.emplace(i, h);
        plan.w.h.emplace(i, h);
    }
    return plan;
}

std::string dump_plan(const Lpe& p, const CleavePlan& plan) {
    std::ostringstream os;
    auto names = [&](const IndexSet& u) {
        std::string out = "{";
        for (std::size_t k : u) {
            out += (out.size() > 1 ? ", " : "") + p.params[k].name;
        }
        return out + "}";
    };
    auto exprs = [](const std::vector<Expr>& es) {
        std::string out = "<";
        for (std::size_t k = 0; k < es.size(); ++k) {
            out += (k > 0 ? ", " : "") + to_string(es[k]);
        }
        return out + ">";
    };
    for (Side side : {Side::V, Side::W}) {
        const auto& t = plan.tuple(side);
        const std::string s = to_string(side);
        os << s << " = " << names(t.U) << "\n";
        os << "  K = " << set_text(t.K) << "\n";
        os << "  J = " << set_text(t.J) << "\n";
        for (const auto& [i, c] : t.c) {
            os << "  summand " << i << ": c = " << to_string(c) << "; alpha = " << to_string(t.alpha.at(i))
               << "; h = " << exprs(t.h.at(i)) << "\n";
        }
    }
    os << "names:";
    for (std::size_t i = 0; i < plan.names.sync.size(); ++i) {
        os << " " << plan.names.sync_v[i] << " " << plan.names.sync_w[i] << " " << plan.names.sync[i];
    }
    os << " " << plan.names.tag << "\n";
    if (plan.no_tag) {
        os << "tag suppressed\n";
    }
    return os.str();
}

namespace {

std::string env_text(std::span<const Variable> vars, const Environment& env) {
    std::string out = "{";
    for (std::size_t k = 0; k < vars.size(); ++k) {
        out += (k > 0 ? ", " : "") + vars[k].name + "=" + to_string(*env.find(vars[k].name), vars[k].sort);
    }
    return out + "}";
}

std::vector<Value> eval_all(std::span<const Expr> es, const Environment& env) {
    std::vector<Value> out;
    out.reserve(es.size());
    for (const auto& e : es) {
        out.push_back(evaluate(e, env));
    }
    return out;
}

std::vector<Value> values_of(std::span<const Variable> vars, const Environment& env) {
    std::vector<Value> out;
    out.reserve(vars.size());
    for (const auto& v : vars) {
        out.push_back(*env.find(v.name));
    }
    return out;
}

// The share of one side in summand r; independent summands contribute whole.
struct SideShare {
    Expr c = Expr::boolean(true);
    MultiActionExpr alpha;
    std::vector<Expr> h;
};

SideShare share_of(const Lpe& p, const SeparationTuple& t, std::size_t r) {
    if (t.K.contains(r) || !t.c.contains(r)) {
        return SideShare{p.summands[r].condition, p.summands[r].action, {}};
    }
    return SideShare{t.c.at(r), t.alpha.at(r), t.h.at(r)};
}

class SummandOracle {
  public:
    SummandOracle(const Lpe& p, const CleavePlan& plan, std::size_t r, std::uint64_t nat_bound, OracleReport& report)
        : r_(r), nat_bound_(nat_bound), report_(report), s_(p.summands[r]),
          v_(share_of(p, plan.v, r)), w_(share_of(p, plan.w, r)) {
        VariableSet used = free_vars(s_.condition);
        add_all(used, free_vars(s_.action));
        add_all(used, vars_of(s_.updates));
        for (const SideShare* sh : {&v_, &w_}) {
            collect_free_vars(sh->c, used);
            add_all(used, free_vars(sh->alpha));
            add_all(used, vars_of(sh->h));
        }
        for (std::size_t k = 0; k < p.params.size(); ++k) {
            if (used.contains(p.params[k])) {
                vars_.push_back(p.params[k]);
                (plan.v.U.contains(k) ? v_params_ : w_params_).push_back(p.params[k]);
            }
        }
        for (const auto& e : s_.sum_vars) {
            if (used.contains(e)) {
                vars_.push_back(e);
            }
        }
        g_v_ = project(s_.updates, plan.v.U);
        g_w_ = project(s_.updates, plan.w.U);
    }

    void check_r3() {
        const bool truncated = for_each_assignment(vars_, nat_bound_, [&](const Environment& env) {
            if (!evaluate(s_.condition, env).as_bool()) {
                return;
            }
            std::string problem;
            if (!evaluate(v_.c, env).as_bool()) {
                problem = "condition of V does not hold";
            } else if (!evaluate(w_.c, env).as_bool()) {
                problem = "condition of W does not hold";
            } else if (eval_all(v_.h, env) != eval_all(w_.h, env)) {
                problem = "synchronisation data differ";
            } else if (evaluate_action(v_.alpha | w_.alpha, env) != evaluate_action(s_.action, env)) {
                problem = "split action differs from the original";
            }
            if (!problem.empty()) {
                if (report_.r3.size() < kReportCap) {
                    report_.r3.push_back("summand " + std::to_string(r_) + " at " + env_text(vars_, env) + ": " + problem);
                }
                ++report_.r3_count;
            }
        });
        report_.truncated = report_.truncated || truncated;
    }

    void check_r4() {
        using Outcome = std::tuple<MultiActionValue, std::vector<Value>, std::vector<Value>>;
        std::map<std::pair<std::vector<Value>, std::vector<Value>>, std::set<Outcome>> outcomes;
        // (own parameters, h, own action, own updates, witness text)
        using SideKey = std::tuple<std::vector<Value>, std::vector<Value>, MultiActionValue, std::vector<Value>>;
        std::map<SideKey, std::string> keys_v;
        std::map<SideKey, std::string> keys_w;

        for_each_assignment(vars_, nat_bound_, [&](const Environment& env) {
            if (evaluate(s_.condition, env).as_bool()) {
                outcomes[{values_of(v_params_, env), values_of(w_params_, env)}].emplace(
                    evaluate_action(s_.action, env), eval_all(g_v_, env), eval_all(g_w_, env));
            }
            if (evaluate(v_.c, env).as_bool()) {
                keys_v.emplace(SideKey{values_of(v_params_, env), eval_all(v_.h, env), evaluate_action(v_.alpha, env),
                                       eval_all(g_v_, env)},
                               env_text(vars_, env));
            }
            if (evaluate(w_.c, env).as_bool()) {
                keys_w.emplace(SideKey{values_of(w_params_, env), eval_all(w_.h, env), evaluate_action(w_.alpha, env),
                                       eval_all(g_w_, env)},
                               env_text(vars_, env));
            }
        });

        std::map<std::vector<Value>, std::vector<const std::pair<const SideKey, std::string>*>> w_by_h;
        for (const auto& entry : keys_w) {
            w_by_h[std::get<1>(entry.first)].push_back(&entry);
        }
        for (const auto& [kv, text_v] : keys_v) {
            auto group = w_by_h.find(std::get<1>(kv));
            if (group == w_by_h.end()) {
                continue;
            }
            for (const auto* entry : group->second) {
                const auto& kw = entry->first;
                auto it = outcomes.find({std::get<0>(kv), std::get<0>(kw)});
                const Outcome wanted{std::get<2>(kv) + std::get<2>(kw), std::get<3>(kv), std::get<3>(kw)};
                if (it != outcomes.end() && it->second.contains(wanted)) {
                    continue;
                }
                if (report_.r4.size() < kReportCap) {
                    report_.r4.push_back("summand " + std::to_string(r_) + ": no matching step for sigma " + text_v +
                                         " and sigma' " + entry->second);
                }
                ++report_.r4_count;
            }
        }
    }

  private:
    std::size_t r_;
    std::uint64_t nat_bound_;
    OracleReport& report_;
    const Summand& s_;
    SideShare v_;
    SideShare w_;
    std::vector<Variable> vars_;
    std::vector<Variable> v_params_;
    std::vector<Variable> w_params_;
    std::vector<Expr> g_v_;
    std::vector<Expr> g_w_;
};

} // namespace

OracleReport check_cleave_oracle(const Lpe& p, const CleavePlan& plan, std::uint64_t nat_bound) {
    OracleReport report;
    const std::size_t n = p.summands.size();
    if (plan.v.J != complement(plan.w.K, n)) {
        report.r1_problems.push_back("J of V is " + set_text(plan.v.J) + ", expected " + set_text(complement(plan.w.K, n)));
    }
    if (plan.w.J != complement(plan.v.K, n)) {
        report.r1_problems.push_back("J of W is " + set_text(plan.w.J) + ", expected " + set_text(complement(plan.v.K, n)));
    }
    report.r1 = report.r1_problems.empty();
    for (Side side : {Side::V, Side::W}) {
        const auto& own = plan.tuple(side);
        const auto& other = plan.tuple(side == Side::V ? Side::W : Side::V);
        for (std::size_t r : own.K) {
            if (r < n && !keeps(p.summands[r], p, other.U)) {
                report.r2_problems.push_back("independent summand " + std::to_string(r) + " of " + to_string(side) +
                                             " changes parameters of the other side");
            }
        }
    }
    report.r2 = report.r2_problems.empty();

    for (std::size_t r : plan.v.J) {
        if (r >= n || !plan.w.J.contains(r)) {
            continue;
        }
        SummandOracle oracle(p, plan, r, nat_bound, report);
        oracle.check_r3();
        oracle.check_r4();
    }
    return report;
}

std::string to_string(const OracleReport& r) {
    std::ostringstream os;
    auto verdict = [](bool ok) { return ok ? "pass" : "fail"; };
    os << "R1 " << verdict(r.r1) << "\n";
    for (const auto& m : r.r1_problems) {
        os << "  " << m << "\n";
    }
    os << "R2 " << verdict(r.r2) << "\n";
    for (const auto& m : r.r2_problems) {
        os << "  " << m << "\n";
    }
    os << "R3 " << verdict(r.r3_count == 0);
    if (r.r3_count > 0) {
        os << " (" << r.r3_count << " violations)";
    }
    os << "\n";
    for (const auto& m : r.r3) {
        os << "  " << m << "\n";
    }
    os << "R4 " << verdict(r.r4_count == 0);
    if (r.r4_count > 0) {
        os << " (" << r.r4_count << " violations)";
    }
    os << "\n";
    for (const auto& m : r.r4) {
        os << "  " << m << "\n";
    }
    if (r.truncated) {
        os << "note: Nat domains truncated; R3 and R4 checked only up to the bound\n";
    }
    return os.str();
}

} // namespace lpecleave

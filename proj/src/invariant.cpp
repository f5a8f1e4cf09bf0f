// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lpecleave/invariant.hpp"

namespace lpecleave {

namespace {

constexpr std::size_t kReportCap = 20;

Expr after_update(const Lpe& p, const Expr& psi, const Summand& s) {
    Substitution m;
    for (std::size_t k = 0; k < p.params.size(); ++k) {
        m.emplace(p.params[k].name, s.updates[k]);
    }
    return substitute(psi, m);
}

} // namespace

std::string to_string(const InvariantViolation& v) {
    std::string out = "summand " + std::to_string(v.summand) + " at {";
    for (std::size_t k = 0; k < v.assignment.size(); ++k) {
        out += (k > 0 ? ", " : "") + v.assignment[k].first + "=" + v.assignment[k].second;
    }
    return out + "}";
}

void validate_invariant(const Lpe& p, const Expr& psi) {
    if (psi.sort().kind() != SortKind::Bool) {
        throw ValidationError("invariant is not boolean");
    }
    for (const auto& v : free_vars(psi)) {
        auto k = p.param_index(v.name);
        if (!k || !(p.params[*k].sort == v.sort)) {
            throw ValidationError("invariant refers to '" + v.name + "', which is not a parameter of " + p.name);
        }
    }
}

InvariantReport check_invariant(const Lpe& p, const Expr& psi, std::uint64_t nat_bound) {
    validate_invariant(p, psi);
    InvariantReport report;
    for (std::size_t i = 0; i < p.summands.size(); ++i) {
        const auto& s = p.summands[i];
        const Expr post = after_update(p, psi, s);
        VariableSet used = free_vars(s.condition);
        collect_free_vars(psi, used);
        collect_free_vars(post, used);
        std::vector<Variable> vars;
        for (const auto& v : p.params) {
            if (used.contains(v)) {
                vars.push_back(v);
            }
        }
        for (const auto& v : s.sum_vars) {
            if (used.contains(v)) {
                vars.push_back(v);
            }
        }
        const bool truncated = for_each_assignment(vars, nat_bound, [&](const Environment& env) {
            if (!evaluate(s.condition, env).as_bool() || !evaluate(psi, env).as_bool() ||
                evaluate(post, env).as_bool()) {
                return;
            }
            ++report.count;
            if (report.violations.size() < kReportCap) {
                InvariantViolation v{i, {}};
                for (const auto& var : vars) {
                    v.assignment.emplace_back(var.name, to_string(*env.find(var.name), var.sort));
                }
                report.violations.push_back(std::move(v));
            }
        });
        report.truncated = report.truncated || truncated;
    }
    report.holds = report.count == 0;
    return report;
}

Lpe restrict_lpe(const Lpe& p, const Expr& psi, const IndexSet& J, bool on_update) {
    Lpe out = p;
    out.name = p.name + "_psi";
    for (std::size_t i : J) {
        if (i >= out.summands.size()) {
            throw IndexOutOfRange("summand index " + std::to_string(i) + " out of range");
        }
        auto& s = out.summands[i];
        s.condition = make_and(s.condition, on_update ? after_update(p, psi, s) : psi);
    }
    return out;
}

std::pair<Lpe, Lpe> restricted_components(const Lpe& p, const CleavePlan& plan, const Expr& psi, bool on_update) {
    validate_invariant(p, psi);
    auto restrict_side = [&](Side side) {
        const auto& own = plan.tuple(side);
        const auto& other = plan.tuple(side == Side::V ? Side::W : Side::V);
        Lpe component = induce_component(p, plan, side);
        IndexSet local;
        std::size_t j = 0;
        for (std::size_t i : own.J) {
            if (other.J.contains(i) && !own.K.contains(i) && !other.K.contains(i)) {
                local.insert(j);
            }
            ++j;
        }
        if (!on_update) {
            Lpe out = restrict_lpe(component, psi, local);
            out.name = component.name;
            return out;
        }
        // The full update vector is in scope of a synchronising summand: own
        // parameters are parameters, foreign ones are sum variables.
        Lpe out = component;
        j = 0;
        for (std::size_t i : own.J) {
            if (local.contains(j)) {
                auto& s = out.summands[j];
                s.condition = make_and(s.condition, after_update(p, psi, p.summands[i]));
            }
            ++j;
        }
        return out;
    };
    return {restrict_side(Side::V), restrict_side(Side::W)};
}

CompositionExpr build_invariant_context(const Lpe& p, const CleavePlan& plan, const Expr& psi,
                                        const std::vector<Value>& init, bool on_update) {
    validate_invariant(p, psi);
    Environment env;
    for (std::size_t k = 0; k < p.params.size() && k < init.size(); ++k) {
        env.bind(p.params[k].name, init[k]);
    }
    if (!evaluate(psi, env).as_bool()) {
        throw InvariantViolatedAtInit("invariant " + to_string(psi) + " does not hold in the initial state");
    }
    auto [v, w] = restricted_components(p, plan, psi, on_update);
    return cleave_context(
        p, plan,
        CompositionExpr::leaf(ProcessInstance{std::make_shared<const Lpe>(std::move(v)), project(init, plan.v.U)}),
        CompositionExpr::leaf(ProcessInstance{std::make_shared<const Lpe>(std::move(w)), project(init, plan.w.U)}));
}

} // namespace lpecleave

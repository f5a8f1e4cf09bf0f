// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lpecleave/lpe.hpp"

#include <sstream>
#include <unordered_set>

namespace lpecleave {

MultiActionExpr operator|(const MultiActionExpr& a, const MultiActionExpr& b) {
    MultiActionExpr out = a;
    out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
    return out;
}

std::string to_string(const MultiActionExpr& a) {
    if (a.is_tau()) {
        return "tau";
    }
    std::string out;
    for (std::size_t i = 0; i < a.factors.size(); ++i) {
        if (i > 0) {
            out += "|";
        }
        out += a.factors[i].label;
        if (!a.factors[i].args.empty()) {
            out += "(";
            for (std::size_t k = 0; k < a.factors[i].args.size(); ++k) {
                if (k > 0) {
                    out += ", ";
                }
                out += to_string(a.factors[i].args[k]);
            }
            out += ")";
        }
    }
    return out;
}

VariableSet free_vars(const MultiActionExpr& a) {
    VariableSet out;
    for (const auto& f : a.factors) {
        for (const auto& e : f.args) {
            collect_free_vars(e, out);
        }
    }
    return out;
}

std::vector<Expr> Lpe::parameter_exprs() const {
    std::vector<Expr> out;
    out.reserve(params.size());
    for (const auto& p : params) {
        out.push_back(Expr::var(p));
    }
    return out;
}

IndexSet Lpe::all_summands() const {
    IndexSet out;
    for (std::size_t i = 0; i < summands.size(); ++i) {
        out.insert(i);
    }
    return out;
}

IndexSet Lpe::all_params() const { return complement({}, params.size()); }

std::optional<std::size_t> Lpe::param_index(const std::string& n) const {
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].name == n) {
            return i;
        }
    }
    return std::nullopt;
}

IndexSet complement(const IndexSet& s, std::size_t n) {
    IndexSet out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!s.contains(i)) {
            out.insert(i);
        }
    }
    return out;
}

namespace {

class SummandChecker {
  public:
    SummandChecker(const Lpe& p, std::size_t index, std::vector<LpeViolation>& out)
        : lpe_(p), index_(index), out_(out) {
        for (const auto& v : p.params) {
            scope_.insert(v);
        }
        const auto& s = p.summands[index];
        std::unordered_set<std::string> sum_names;
        for (const auto& v : s.sum_vars) {
            if (p.param_index(v.name)) {
                report(v.name, "sum variable '" + v.name + "' shadows a process parameter");
            }
            if (!sum_names.insert(v.name).second) {
                report(v.name, "sum variable '" + v.name + "' declared twice");
            }
            scope_.insert(v);
        }
    }

    void check_scope(const Expr& e, const std::string& where) {
        for (const auto& v : free_vars(e)) {
            if (!scope_.contains(v)) {
                report(v.name, "variable '" + v.name + "' in " + where + " is neither a parameter nor a sum variable");
            }
        }
    }

    void report(const std::string& subject, const std::string& message) {
        out_.push_back(LpeViolation{index_, subject, message});
    }

    void run() {
        const auto& s = lpe_.summands[index_];
        if (s.condition.sort().kind() != SortKind::Bool) {
            report("", "condition is not boolean");
        }
        check_scope(s.condition, "condition");

        for (const auto& f : s.action.factors) {
            auto it = lpe_.actions.find(f.label);
            if (it == lpe_.actions.end()) {
                report(f.label, "action '" + f.label + "' is not declared");
            } else if (it->second.size() != f.args.size()) {
                report(f.label, "action '" + f.label + "' expects " + std::to_string(it->second.size()) + " arguments, got " +
                                    std::to_string(f.args.size()));
            } else {
                for (std::size_t k = 0; k < f.args.size(); ++k) {
                    if (!(f.args[k].sort() == it->second[k])) {
                        report(f.label, "argument " + std::to_string(k) + " of '" + f.label + "' has sort " +
                                            f.args[k].sort().name() + ", expected " + it->second[k].name());
                    }
                }
            }
            for (const auto& a : f.args) {
                check_scope(a, "action '" + f.label + "'");
            }
        }

        if (s.updates.size() != lpe_.params.size()) {
            report("", "update list has " + std::to_string(s.updates.size()) + " entries for " +
                           std::to_string(lpe_.params.size()) + " parameters");
        }
        for (std::size_t k = 0; k < s.updates.size(); ++k) {
            if (k < lpe_.params.size() && !(s.updates[k].sort() == lpe_.params[k].sort)) {
                report(lpe_.params[k].name, "update of '" + lpe_.params[k].name + "' has sort " + s.updates[k].sort().name());
            }
            check_scope(s.updates[k], "update " + std::to_string(k));
        }
    }

  private:
    const Lpe& lpe_;
    std::size_t index_;
    std::vector<LpeViolation>& out_;
    VariableSet scope_;
};

} // namespace

std::vector<LpeViolation> validate_lpe(const Lpe& p) {
    std::vector<LpeViolation> out;
    std::unordered_set<std::string> names;
    for (const auto& v : p.params) {
        if (!names.insert(v.name).second) {
            out.push_back(LpeViolation{std::nullopt, v.name, "parameter '" + v.name + "' declared twice"});
        }
    }
    for (std::size_t i = 0; i < p.summands.size(); ++i) {
        SummandChecker(p, i, out).run();
    }
    return out;
}

std::vector<LpeViolation> validate_instance(const ProcessInstance& inst) {
    std::vector<LpeViolation> out = validate_lpe(*inst.lpe);
    const auto& params = inst.lpe->params;
    if (inst.init.size() != params.size()) {
        out.push_back(LpeViolation{std::nullopt, "", "initial vector has " + std::to_string(inst.init.size()) +
                                                         " values for " + std::to_string(params.size()) + " parameters"});
        return out;
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
        const auto& sort = params[k].sort;
        const bool ok = inst.init[k].kind() == sort.kind() &&
                        (sort.kind() != SortKind::Enum || inst.init[k].as_index() < sort.constructors().size());
        if (!ok) {
            out.push_back(LpeViolation{std::nullopt, params[k].name,
                                       "initial value of '" + params[k].name + "' is not of sort " + sort.name()});
        }
    }
    return out;
}

std::string to_string(const LpeViolation& v) {
    std::ostringstream os;
    if (v.summand) {
        os << "summand " << *v.summand << ": ";
    }
    os << v.message;
    return os.str();
}

} // namespace lpecleave

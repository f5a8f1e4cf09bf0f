// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <algorithm>
#include <numeric>

#include "lpecleave/compose.hpp"
#include "lpecleave/explore.hpp"

namespace lpecleave::testing {

CleavePlan naive_machine_plan(const Lpe& machine) {
    const Sort nat = Sort::natural();
    const Sort boolean = Sort::boolean();
    const Expr n = Expr::var("n", nat);
    const Expr s = Expr::var("s", boolean);
    const std::vector<Expr> h{n, s};

    CleavePlan plan;
    plan.names = make_fresh_names(machine);
    plan.v.U = {0};
    plan.v.J = {0, 1};
    plan.v.c.insert_or_assign(0, make_gt(n, Expr::natural(0)));
    plan.v.alpha[0] = MultiActionExpr{{ActionFactorExpr{"count", {}}}};
    plan.v.c.insert_or_assign(1, make_eq(n, Expr::natural(0)));
    plan.v.alpha[1] = MultiActionExpr{};
    plan.w.U = {1};
    plan.w.J = {0, 1};
    plan.w.c.insert_or_assign(0, make_gt(n, Expr::natural(0)));
    plan.w.alpha[0] = MultiActionExpr{};
    plan.w.c.insert_or_assign(1, make_eq(n, Expr::natural(0)));
    plan.w.alpha[1] = MultiActionExpr{{ActionFactorExpr{"toggle", {}}}};
    for (std::size_t i : {0u, 1u}) {
        plan.v.h[i] = h;
        plan.w.h[i] = h;
    }
    return plan;
}

std::vector<std::vector<bool>> naive_bisimulation(const Lts& l) {
    const std::size_t n = l.num_states();
    const auto succ = l.successors();
    std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, true));
    // s is simulated by t within rel
    auto matched = [&](StateId s, StateId t) {
        for (const auto& [a, s2] : succ[s]) {
            bool found = false;
            for (const auto& [b, t2] : succ[t]) {
                if (a == b && rel[s2][t2]) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                return false;
            }
        }
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s = 0; s < n; ++s) {
            for (StateId t = 0; t < n; ++t) {
                if (rel[s][t] && (!matched(s, t) || !matched(t, s))) {
                    rel[s][t] = false;
                    rel[t][s] = false;
                    changed = true;
                }
            }
        }
    }
    return rel;
}

std::size_t naive_block_count(const Lts& l) {
    const auto rel = naive_bisimulation(l);
    std::vector<bool> done(l.num_states(), false);
    std::size_t blocks = 0;
    for (std::size_t s = 0; s < l.num_states(); ++s) {
        if (done[s]) {
            continue;
        }
        ++blocks;
        for (std::size_t t = s; t < l.num_states(); ++t) {
            if (rel[s][t]) {
                done[t] = true;
            }
        }
    }
    return blocks;
}

Lts random_lts(std::mt19937& rng, std::size_t max_states, std::size_t num_labels) {
    std::uniform_int_distribution<std::size_t> size_dist(1, max_states);
    const std::size_t n = size_dist(rng);
    std::vector<MultiActionValue> labels;
    for (std::size_t k = 0; k < num_labels; ++k) {
        labels.push_back(MultiActionValue({ActionValue{std::string(1, static_cast<char>('a' + k)), {}}}));
    }
    labels.push_back(MultiActionValue::tau());
    std::uniform_int_distribution<std::size_t> label_dist(0, labels.size() - 1);

    LtsBuilder b;
    for (std::size_t s = 0; s < n; ++s) {
        b.add_state();
    }
    b.set_initial(0);
    for (std::size_t s = 1; s < n; ++s) {
        std::uniform_int_distribution<std::size_t> parent(0, s - 1);
        b.add_transition(static_cast<StateId>(parent(rng)), labels[label_dist(rng)], static_cast<StateId>(s));
    }
    std::uniform_int_distribution<std::size_t> state_dist(0, n - 1);
    std::uniform_int_distribution<std::size_t> extra_dist(0, 2 * n);
    const std::size_t extra = extra_dist(rng);
    for (std::size_t k = 0; k < extra; ++k) {
        b.add_transition(static_cast<StateId>(state_dist(rng)), labels[label_dist(rng)],
                         static_cast<StateId>(state_dist(rng)));
    }
    return std::move(b).build();
}

namespace {

enum class Kind { Bool, Enum, Nat };

struct Param {
    std::string name;
    Kind kind;
};

class LpeWriter {
  public:
    explicit LpeWriter(std::mt19937& rng) : rng_(rng) {}

    std::string write() {
        const std::size_t num_params = pick(1, 4);
        for (std::size_t k = 0; k < num_params; ++k) {
            params_.push_back(Param{"p" + std::to_string(k), static_cast<Kind>(pick(0, 2))});
        }
        std::string out = "sort E = struct e0 | e1 | e2;\nact a, d;\nact b : Bool;\nact c : Nat;\nact f : E;\n";
        out += "proc P(";
        for (std::size_t k = 0; k < params_.size(); ++k) {
            out += (k ? ", " : "") + params_[k].name + ": " + sort_name(params_[k].kind);
        }
        out += ") =\n";
        const std::size_t num_summands = pick(1, 5);
        for (std::size_t i = 0; i < num_summands; ++i) {
            out += i ? "  + " : "    ";
            out += summand() + "\n";
        }
        out += ";\ninit P(";
        for (std::size_t k = 0; k < params_.size(); ++k) {
            out += (k ? ", " : "") + literal(params_[k].kind);
        }
        return out + ");\n";
    }

  private:
    std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

    static std::string sort_name(Kind k) {
        switch (k) {
        case Kind::Bool: return "Bool";
        case Kind::Enum: return "E";
        case Kind::Nat: return "Nat";
        }
        return "";
    }

    std::string literal(Kind k) {
        switch (k) {
        case Kind::Bool: return chance(0.5) ? "true" : "false";
        case Kind::Enum: return "e" + std::to_string(pick(0, 2));
        case Kind::Nat: return std::to_string(pick(0, 4));
        }
        return "";
    }

    std::vector<std::string> names_of(Kind k) const {
        std::vector<std::string> out;
        for (const auto& p : params_) {
            if (p.kind == k) {
                out.push_back(p.name);
            }
        }
        for (const auto& v : sums_) {
            if (v.kind == k) {
                out.push_back(v.name);
            }
        }
        return out;
    }

    std::string var_or_literal(Kind k) {
        const auto names = names_of(k);
        if (names.empty() || chance(0.25)) {
            return literal(k);
        }
        return names[pick(0, names.size() - 1)];
    }

    std::string atom() {
        switch (pick(0, 3)) {
        case 0: {
            const std::string v = var_or_literal(Kind::Bool);
            return chance(0.3) ? "!" + v : v;
        }
        case 1: return var_or_literal(Kind::Enum) + " == " + literal(Kind::Enum);
        case 2: {
            static const char* const ops[] = {" == ", " < ", " > ", " <= "};
            return var_or_literal(Kind::Nat) + ops[pick(0, 3)] + literal(Kind::Nat);
        }
        default: return var_or_literal(Kind::Bool);
        }
    }

    std::string condition() {
        if (chance(0.15)) {
            return "true";
        }
        std::string c = atom();
        const std::size_t extra = pick(0, 2);
        for (std::size_t k = 0; k < extra; ++k) {
            c += chance(0.7) ? " && " : " || ";
            c += atom();
        }
        return c;
    }

    std::string expr(Kind k) {
        if (chance(0.35)) {
            return var_or_literal(k);
        }
        switch (k) {
        case Kind::Bool: return chance(0.5) ? "!" + var_or_literal(Kind::Bool) : "(" + atom() + ")";
        case Kind::Enum: return "if(" + atom() + ", " + literal(Kind::Enum) + ", " + var_or_literal(Kind::Enum) + ")";
        case Kind::Nat: {
            const std::string v = var_or_literal(Kind::Nat);
            switch (pick(0, 2)) {
            case 0: return "if(" + v + " < 4, " + v + " + 1, 0)";
            case 1: return v + " - 1";
            default: return "if(" + atom() + ", " + literal(Kind::Nat) + ", " + v + ")";
            }
        }
        }
        return "";
    }

    std::string action() {
        const std::size_t factors = pick(0, 2);
        if (factors == 0) {
            return "tau";
        }
        std::string out;
        for (std::size_t k = 0; k < factors; ++k) {
            out += k ? "|" : "";
            switch (pick(0, 4)) {
            case 0: out += "a"; break;
            case 1: out += "d"; break;
            case 2: out += "b(" + expr(Kind::Bool) + ")"; break;
            case 3: out += "c(" + expr(Kind::Nat) + ")"; break;
            default: out += "f(" + expr(Kind::Enum) + ")"; break;
            }
        }
        return out;
    }

    std::string summand() {
        sums_.clear();
        std::string out;
        if (chance(0.3)) {
            const Kind k = chance(0.5) ? Kind::Bool : Kind::Enum;
            sums_.push_back(Param{"v", k});
            out += "sum v: " + sort_name(k) + " . ";
        }
        out += condition() + " -> " + action() + " . P(";
        for (std::size_t k = 0; k < params_.size(); ++k) {
            out += k ? ", " : "";
            out += chance(0.5) ? params_[k].name : expr(params_[k].kind);
        }
        return out + ")";
    }

    std::mt19937& rng_;
    std::vector<Param> params_;
    std::vector<Param> sums_;
};

} // namespace

std::string random_lpe_spec(std::mt19937& rng) { return LpeWriter(rng).write(); }

std::pair<std::vector<std::string>, std::vector<std::string>> random_partition(std::mt19937& rng, const Lpe& p) {
    std::vector<std::string> v, w;
    if (p.params.size() == 1) {
        (std::bernoulli_distribution(0.5)(rng) ? v : w).push_back(p.params[0].name);
        return {v, w};
    }
    std::vector<std::size_t> order(p.params.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t cut = std::uniform_int_distribution<std::size_t>(1, order.size() - 1)(rng);
    for (std::size_t k = 0; k < order.size(); ++k) {
        (k < cut ? v : w).push_back(p.params[order[k]].name);
    }
    return {v, w};
}

bool mutate_plan(std::mt19937& rng, CleavePlan& plan) {
    std::vector<std::size_t> shared;
    for (std::size_t i : plan.v.J) {
        if (plan.w.J.count(i) && !plan.v.K.count(i) && !plan.w.K.count(i)) {
            shared.push_back(i);
        }
    }
    if (shared.empty()) {
        return false;
    }
    const std::size_t i = shared[std::uniform_int_distribution<std::size_t>(0, shared.size() - 1)(rng)];
    SeparationTuple& mine = std::bernoulli_distribution(0.5)(rng) ? plan.v : plan.w;
    SeparationTuple& other = &mine == &plan.v ? plan.w : plan.v;
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0:
        plan.v.h[i].clear();
        plan.w.h[i].clear();
        break;
    case 1:
        if (!plan.v.h[i].empty()) {
            plan.v.h[i].pop_back();
            plan.w.h[i].pop_back();
        }
        break;
    case 2:
        mine.c.insert_or_assign(i, Expr::boolean(true));
        break;
    default:
        if (!mine.alpha[i].factors.empty()) {
            other.alpha[i].factors.push_back(mine.alpha[i].factors.back());
            mine.alpha[i].factors.pop_back();
        }
        break;
    }
    return true;
}

CleaveOutcome run_cleave(const SpecFile& spec, const CleavePlan& plan, std::uint64_t nat_bound, bool always_compose) {
    CleaveOutcome out;
    const Lpe& p = *spec.init.lpe;
    out.oracle_passed = check_cleave_oracle(p, plan, nat_bound).passed();
    if (!out.oracle_passed && !always_compose) {
        return out;
    }
    Limits limits;
    limits.nat_bound = nat_bound;
    limits.max_states = 200'000;
    const Lts mono = explore_lpe(spec.init, limits);
    const Lts comp = explore_composition(build_cleave_context(p, plan, spec.init.init), limits);
    out.mono_states = mono.num_states();
    out.comp_states = comp.num_states();
    out.bisimilar = check_bisim(comp, mono).bisimilar;
    return out;
}

} // namespace lpecleave::testing

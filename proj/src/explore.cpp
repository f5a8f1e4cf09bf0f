// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lpecleave/explore.hpp"

#include <deque>
#include <unordered_map>

namespace lpecleave {

MultiActionValue evaluate_action(const MultiActionExpr& a, const Environment& env) {
    std::vector<ActionValue> factors;
    factors.reserve(a.factors.size());
    for (const auto& f : a.factors) {
        ActionValue v{f.label, {}};
        v.args.reserve(f.args.size());
        for (const auto& e : f.args) {
            v.args.push_back(to_string(evaluate(e, env), e.sort()));
        }
        factors.push_back(std::move(v));
    }
    return MultiActionValue(std::move(factors));
}

std::size_t StateVectorHash::operator()(const StateVector& s) const {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (const auto& v : s) {
        h = (h ^ v.raw()) * 0x100000001b3ULL;
        h ^= h >> 31;
    }
    return static_cast<std::size_t>(h);
}

std::string truncation_warning(std::uint64_t nat_bound) {
    return "Nat sum variables enumerated only up to " + std::to_string(nat_bound) + "; branching is truncated";
}

Stepper::Stepper(std::shared_ptr<const Lpe> lpe, std::uint64_t nat_bound) : lpe_(std::move(lpe)) {
    for (const auto& s : lpe_->summands) {
        VariableSet used;
        collect_free_vars(s.condition, used);
        for (const auto& v : free_vars(s.action)) {
            used.insert(v);
        }
        for (const auto& u : s.updates) {
            collect_free_vars(u, used);
        }
        SummandPlan plan;
        for (const auto& v : s.sum_vars) {
            if (!used.contains(v)) {
                continue;
            }
            plan.sums.push_back(v);
            plan.domains.push_back(enumerate_sort(v.sort, nat_bound));
            truncated_ = truncated_ || plan.domains.back().truncated;
        }
        plans_.push_back(std::move(plan));
    }
}

std::vector<Step> Stepper::successors(const StateVector& state) const {
    std::vector<Step> out;
    Environment env;
    for (std::size_t k = 0; k < lpe_->params.size(); ++k) {
        env.bind(lpe_->params[k].name, state[k]);
    }
    for (std::size_t i = 0; i < lpe_->summands.size(); ++i) {
        const auto& summand = lpe_->summands[i];
        const auto& plan = plans_[i];
        // Odometer over the sum-variable domains; the last variable varies fastest.
        std::vector<std::size_t> digit(plan.sums.size(), 0);
        while (true) {
            for (std::size_t k = 0; k < plan.sums.size(); ++k) {
                env.bind(plan.sums[k].name, plan.domains[k].values[digit[k]]);
            }
            if (evaluate(summand.condition, env).as_bool()) {
                Step step;
                step.summand = i;
                step.label = evaluate_action(summand.action, env);
                step.target.reserve(summand.updates.size());
                for (const auto& u : summand.updates) {
                    step.target.push_back(evaluate(u, env));
                }
                out.push_back(std::move(step));
            }
            std::size_t k = plan.sums.size();
            while (k > 0) {
                --k;
                if (++digit[k] < plan.domains[k].values.size()) {
                    break;
                }
                digit[k] = 0;
                if (k == 0) {
                    k = plan.sums.size() + 1;
                    break;
                }
            }
            if (plan.sums.empty() || k == plan.sums.size() + 1) {
                break;
            }
        }
    }
    return out;
}

std::string Stepper::describe(const StateVector& state) const {
    std::string out = lpe_->name + "(";
    for (std::size_t k = 0; k < state.size(); ++k) {
        if (k > 0) {
            out += ", ";
        }
        out += to_string(state[k], lpe_->params[k].sort);
    }
    return out + ")";
}

Lts explore_lpe(const ProcessInstance& inst, const Limits& limits) {
    Stepper stepper(inst.lpe, limits.nat_bound);
    LtsBuilder builder;
    std::unordered_map<StateVector, StateId, StateVectorHash> ids;
    std::deque<StateVector> frontier;

    auto lookup = [&](const StateVector& s) -> StateId {
        auto it = ids.find(s);
        if (it != ids.end()) {
            return it->second;
        }
        if (builder.num_states() >= limits.max_states) {
            throw LimitExceeded(LimitExceeded::Kind::States, builder.snapshot());
        }
        const StateId id = builder.add_state(stepper.describe(s));
        ids.emplace(s, id);
        frontier.push_back(s);
        return id;
    };

    if (stepper.truncated()) {
        builder.add_warning(truncation_warning(limits.nat_bound));
    }
    builder.set_initial(lookup(inst.init));
    StateId current = 0;
    while (!frontier.empty()) {
        const StateVector s = std::move(frontier.front());
        frontier.pop_front();
        for (auto& step : stepper.successors(s)) {
            const StateId dst = lookup(step.target);
            builder.add_transition(current, step.label, dst);
            if (builder.num_transitions() > limits.max_transitions) {
                throw LimitExceeded(LimitExceeded::Kind::Transitions, builder.snapshot());
            }
        }
        ++current;
    }
    return std::move(builder).build();
}

} // namespace lpecleave

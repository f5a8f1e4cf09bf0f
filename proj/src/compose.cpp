// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lpecleave/compose.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>

namespace lpecleave {

ActionBag make_bag(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    return names;
}

ActionBag strip_data(const MultiActionValue& m) {
    ActionBag out;
    out.reserve(m.size());
    for (const auto& f : m.factors()) {
        out.push_back(f.label);
    }
    return make_bag(std::move(out));
}

ActionBag strip_data(const MultiActionExpr& a) {
    ActionBag out;
    out.reserve(a.factors.size());
    for (const auto& f : a.factors) {
        out.push_back(f.label);
    }
    return make_bag(std::move(out));
}

std::string to_string(const ActionBag& bag) {
    if (bag.empty()) {
        return "tau";
    }
    std::string out;
    for (std::size_t i = 0; i < bag.size(); ++i) {
        out += (i > 0 ? "|" : "") + bag[i];
    }
    return out;
}

std::string to_string(const CommRule& r) { return to_string(r.lhs) + " -> " + r.rhs; }

std::vector<std::string> validate_comms(const std::vector<CommRule>& rules) {
    std::vector<std::string> out;
    std::map<std::string, std::size_t> owner;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (rules[i].lhs.empty()) {
            out.push_back("communication " + to_string(rules[i]) + " has an empty left-hand side");
        }
        ActionBag distinct = rules[i].lhs;
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (const auto& a : distinct) {
            auto [it, fresh] = owner.emplace(a, i);
            if (!fresh) {
                out.push_back("label '" + a + "' occurs in the left-hand sides of " + to_string(rules[it->second]) +
                              " and " + to_string(rules[i]));
            }
        }
    }
    for (const auto& r : rules) {
        auto it = owner.find(r.rhs);
        if (it != owner.end() && !(rules[it->second] == r)) {
            out.push_back("result '" + r.rhs + "' of " + to_string(r) + " occurs in the left-hand side of " +
                          to_string(rules[it->second]));
        }
    }
    return out;
}

MultiActionValue gamma_apply(const std::vector<CommRule>& rules, const MultiActionValue& m) {
    if (rules.empty() || m.is_tau()) {
        return m;
    }
    std::map<ActionValue, std::size_t> counts;
    for (const auto& f : m.factors()) {
        ++counts[f];
    }
    for (const auto& rule : rules) {
        std::map<std::string, std::size_t> need;
        for (const auto& a : rule.lhs) {
            ++need[a];
        }
        std::set<std::vector<std::string>> tuples;
        for (const auto& [f, n] : counts) {
            if (n > 0 && need.contains(f.label)) {
                tuples.insert(f.args);
            }
        }
        for (const auto& d : tuples) {
            std::size_t firings = std::numeric_limits<std::size_t>::max();
            for (const auto& [label, k] : need) {
                auto it = counts.find(ActionValue{label, d});
                firings = std::min(firings, it == counts.end() ? 0 : it->second / k);
            }
            if (firings == 0) {
                continue;
            }
            for (const auto& [label, k] : need) {
                counts[ActionValue{label, d}] -= firings * k;
            }
            counts[ActionValue{rule.rhs, d}] += firings;
        }
    }
    std::vector<ActionValue> factors;
    for (const auto& [f, n] : counts) {
        factors.insert(factors.end(), n, f);
    }
    return MultiActionValue(std::move(factors));
}

MultiActionValue hide_apply(const std::set<std::string>& hidden, const MultiActionValue& m) {
    std::vector<ActionValue> kept;
    for (const auto& f : m.factors()) {
        if (!hidden.contains(f.label)) {
            kept.push_back(f);
        }
    }
    return MultiActionValue(std::move(kept));
}

struct CompositionExpr::Node {
    Kind kind = Kind::Leaf;
    std::vector<CompositionExpr> children;
    std::vector<CommRule> rules;
    std::set<ActionBag> allowed;
    std::set<std::string> hidden;
    ProcessInstance instance;
    std::shared_ptr<const Lts> lts;
    std::string name;
};

CompositionExpr CompositionExpr::leaf(ProcessInstance inst) {
    auto n = std::make_shared<Node>();
    n->name = inst.lpe ? inst.lpe->name : "";
    n->instance = std::move(inst);
    return CompositionExpr(std::move(n));
}

CompositionExpr CompositionExpr::leaf(std::shared_ptr<const Lts> lts, std::string name) {
    auto n = std::make_shared<Node>();
    n->lts = std::move(lts);
    n->name = std::move(name);
    return CompositionExpr(std::move(n));
}

CompositionExpr CompositionExpr::par(CompositionExpr left, CompositionExpr right) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Par;
    n->children = {std::move(left), std::move(right)};
    return CompositionExpr(std::move(n));
}

CompositionExpr CompositionExpr::comm(std::vector<CommRule> rules, CompositionExpr child) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Comm;
    for (auto& r : rules) {
        r.lhs = make_bag(std::move(r.lhs));
    }
    n->rules = std::move(rules);
    n->children = {std::move(child)};
    return CompositionExpr(std::move(n));
}

CompositionExpr CompositionExpr::allow(std::set<ActionBag> allowed, CompositionExpr child) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Allow;
    for (const auto& bag : allowed) {
        n->allowed.insert(make_bag(bag));
    }
    n->children = {std::move(child)};
    return CompositionExpr(std::move(n));
}

CompositionExpr CompositionExpr::hide(std::set<std::string> hidden, CompositionExpr child) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Hide;
    n->hidden = std::move(hidden);
    n->children = {std::move(child)};
    return CompositionExpr(std::move(n));
}

CompositionExpr::Kind CompositionExpr::kind() const { return node_->kind; }
const std::vector<CompositionExpr>& CompositionExpr::children() const { return node_->children; }
const std::vector<CommRule>& CompositionExpr::rules() const { return node_->rules; }
const std::set<ActionBag>& CompositionExpr::allowed() const { return node_->allowed; }
const std::set<std::string>& CompositionExpr::hidden() const { return node_->hidden; }
const ProcessInstance& CompositionExpr::instance() const { return node_->instance; }
const std::shared_ptr<const Lts>& CompositionExpr::lts() const { return node_->lts; }
const std::string& CompositionExpr::leaf_name() const { return node_->name; }

std::vector<const CompositionExpr*> CompositionExpr::leaves() const {
    if (kind() == Kind::Leaf) {
        return {this};
    }
    std::vector<const CompositionExpr*> out;
    for (const auto& c : children()) {
        auto sub = c.leaves();
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

namespace {

std::string join_names(const std::set<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        out += (out.empty() ? "" : ", ") + n;
    }
    return out;
}

std::string leaf_text(const CompositionExpr& e) {
    if (e.lts()) {
        return e.leaf_name();
    }
    const auto& inst = e.instance();
    std::string out = inst.lpe->name + "(";
    for (std::size_t k = 0; k < inst.init.size(); ++k) {
        out += (k > 0 ? ", " : "") + to_string(inst.init[k], inst.lpe->params[k].sort);
    }
    return out + ")";
}

} // namespace

std::string to_string(const CompositionExpr& e) {
    using Kind = CompositionExpr::Kind;
    switch (e.kind()) {
    case Kind::Leaf:
        return leaf_text(e);
    case Kind::Par:
        return to_string(e.children()[0]) + " || " + to_string(e.children()[1]);
    case Kind::Comm: {
        std::string rules;
        for (const auto& r : e.rules()) {
            rules += (rules.empty() ? "" : ", ") + to_string(r);
        }
        return "comm({" + rules + "}, " + to_string(e.children()[0]) + ")";
    }
    case Kind::Allow: {
        std::string bags;
        for (const auto& b : e.allowed()) {
            bags += (bags.empty() ? "" : ", ") + to_string(b);
        }
        return "allow({" + bags + "}, " + to_string(e.children()[0]) + ")";
    }
    case Kind::Hide:
        return "hide({" + join_names(e.hidden()) + "}, " + to_string(e.children()[0]) + ")";
    }
    return {};
}

std::vector<std::string> validate_composition(const CompositionExpr& e) {
    using Kind = CompositionExpr::Kind;
    std::vector<std::string> out;
    switch (e.kind()) {
    case Kind::Leaf:
        if (e.lts()) {
            break;
        }
        if (!e.instance().lpe) {
            out.push_back("leaf without a process");
            break;
        }
        for (const auto& v : validate_instance(e.instance())) {
            out.push_back(e.instance().lpe->name + ": " + to_string(v));
        }
        break;
    case Kind::Comm:
        for (auto& msg : validate_comms(e.rules())) {
            out.push_back(std::move(msg));
        }
        break;
    case Kind::Allow:
        if (e.allowed().empty()) {
            out.push_back("allow set is empty");
        }
        break;
    case Kind::Hide:
        if (e.hidden().empty()) {
            out.push_back("hide set is empty");
        }
        break;
    case Kind::Par:
        break;
    }
    for (const auto& c : e.children()) {
        for (auto& msg : validate_composition(c)) {
            out.push_back(std::move(msg));
        }
    }
    return out;
}

namespace {

using LocalId = std::uint32_t;
using Composite = std::vector<LocalId>;

struct CompositeHash {
    std::size_t operator()(const Composite& c) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (LocalId x : c) {
            h = (h ^ x) * 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

class LabelTable {
  public:
    LabelId intern(const MultiActionValue& m) {
        auto [it, fresh] = ids_.emplace(m, static_cast<LabelId>(labels_.size()));
        if (fresh) {
            labels_.push_back(m);
        }
        return it->second;
    }
    const MultiActionValue& get(LabelId id) const { return labels_[id]; }

  private:
    std::unordered_map<MultiActionValue, LabelId, MultiActionHash> ids_;
    std::vector<MultiActionValue> labels_;
};

using LeafSteps = std::vector<std::pair<LabelId, LocalId>>;

// State space of one leaf, computed lazily and memoised per local state.
class LeafEngine {
  public:
    LeafEngine(const CompositionExpr& leaf, LabelTable& labels, const Limits& limits)
        : labels_(labels) {
        if (leaf.lts()) {
            lts_ = leaf.lts();
            const auto succ = lts_->successors();
            cache_.resize(succ.size());
            for (std::size_t s = 0; s < succ.size(); ++s) {
                LeafSteps steps;
                for (auto [l, dst] : succ[s]) {
                    steps.emplace_back(labels_.intern(lts_->label(l)), dst);
                }
                cache_[s] = std::move(steps);
            }
            name_ = leaf.leaf_name();
        } else {
            stepper_.emplace(leaf.instance().lpe, limits.nat_bound);
            init_vector_ = leaf.instance().init;
        }
    }

    LocalId initial() {
        if (lts_) {
            return lts_->initial();
        }
        return intern(init_vector_);
    }

    const LeafSteps& steps(LocalId s) {
        if (lts_) {
            return *cache_[s];
        }
        if (!cache_[s]) {
            LeafSteps out;
            const StateVector current = states_[s];
            for (auto& step : stepper_->successors(current)) {
                const LabelId l = labels_.intern(step.label);
                out.emplace_back(l, intern(step.target));
            }
            cache_[s] = std::move(out);
        }
        return *cache_[s];
    }

    std::string describe(LocalId s) const {
        if (lts_) {
            return name_ + "#" + std::to_string(s);
        }
        return stepper_->describe(states_[s]);
    }

    bool truncated() const { return stepper_ && stepper_->truncated(); }

  private:
    LocalId intern(const StateVector& v) {
        auto [it, fresh] = ids_.emplace(v, static_cast<LocalId>(states_.size()));
        if (fresh) {
            states_.push_back(v);
            cache_.emplace_back();
        }
        return it->second;
    }

    LabelTable& labels_;
    std::shared_ptr<const Lts> lts_;
    std::string name_;
    std::optional<Stepper> stepper_;
    StateVector init_vector_;
    std::vector<StateVector> states_;
    std::unordered_map<StateVector, LocalId, StateVectorHash> ids_;
    std::vector<std::optional<LeafSteps>> cache_;
};

// A step of a subtree: label and the new local states of the leaves it spans.
struct SubStep {
    LabelId label;
    Composite slice;
};

class CompositionEngine {
  public:
    CompositionEngine(const CompositionExpr& root, const Limits& limits) {
        for (const auto* leaf : root.leaves()) {
            leaves_.emplace_back(*leaf, labels_, limits);
        }
        std::size_t next_leaf = 0;
        root_ = compile(root, next_leaf);
    }

    Composite initial() {
        Composite c;
        for (auto& l : leaves_) {
            c.push_back(l.initial());
        }
        return c;
    }

    std::vector<SubStep> successors(const Composite& c) { return steps(root_, c); }

    const MultiActionValue& label(LabelId id) const { return labels_.get(id); }

    std::string describe(const Composite& c) const {
        std::string out;
        for (std::size_t k = 0; k < c.size(); ++k) {
            out += (k > 0 ? " || " : "") + leaves_[k].describe(c[k]);
        }
        return out;
    }

    bool truncated() const {
        return std::any_of(leaves_.begin(), leaves_.end(), [](const LeafEngine& l) { return l.truncated(); });
    }

  private:
    struct CompiledNode {
        const CompositionExpr* expr;
        std::size_t lo;
        std::size_t hi;
        std::vector<std::size_t> children;
        // Label rewriting memo for Comm, Hide and Allow; absent means blocked.
        std::unordered_map<LabelId, std::optional<LabelId>> memo;
    };

    std::size_t compile(const CompositionExpr& e, std::size_t& next_leaf) {
        CompiledNode node{&e, next_leaf, next_leaf, {}, {}};
        if (e.kind() == CompositionExpr::Kind::Leaf) {
            ++next_leaf;
        }
        for (const auto& c : e.children()) {
            node.children.push_back(compile(c, next_leaf));
        }
        node.hi = next_leaf;
        nodes_.push_back(std::move(node));
        return nodes_.size() - 1;
    }

    std::optional<LabelId> rewrite(CompiledNode& node, LabelId l) {
        auto it = node.memo.find(l);
        if (it != node.memo.end()) {
            return it->second;
        }
        std::optional<LabelId> out;
        const auto& m = labels_.get(l);
        switch (node.expr->kind()) {
        case CompositionExpr::Kind::Comm:
            out = labels_.intern(gamma_apply(node.expr->rules(), m));
            break;
        case CompositionExpr::Kind::Hide:
            out = labels_.intern(hide_apply(node.expr->hidden(), m));
            break;
        case CompositionExpr::Kind::Allow:
            if (node.expr->allowed().contains(strip_data(m))) {
                out = l;
            }
            break;
        default:
            out = l;
        }
        node.memo.emplace(l, out);
        return out;
    }

    std::vector<SubStep> steps(std::size_t index, const Composite& c) {
        auto& node = nodes_[index];
        std::vector<SubStep> out;
        switch (node.expr->kind()) {
        case CompositionExpr::Kind::Leaf:
            for (auto [l, dst] : leaves_[node.lo].steps(c[node.lo])) {
                out.push_back(SubStep{l, {dst}});
            }
            break;
        case CompositionExpr::Kind::Par: {
            const auto& left = nodes_[node.children[0]];
            const auto& right = nodes_[node.children[1]];
            const std::size_t split = left.hi;
            auto ls = steps(node.children[0], c);
            auto rs = steps(node.children[1], c);
            const Composite lcur(c.begin() + static_cast<std::ptrdiff_t>(left.lo), c.begin() + static_cast<std::ptrdiff_t>(split));
            const Composite rcur(c.begin() + static_cast<std::ptrdiff_t>(split), c.begin() + static_cast<std::ptrdiff_t>(right.hi));
            auto concat = [](const Composite& a, const Composite& b) {
                Composite r = a;
                r.insert(r.end(), b.begin(), b.end());
                return r;
            };
            for (const auto& s : ls) {
                out.push_back(SubStep{s.label, concat(s.slice, rcur)});
            }
            for (const auto& s : rs) {
                out.push_back(SubStep{s.label, concat(lcur, s.slice)});
            }
            for (const auto& a : ls) {
                for (const auto& b : rs) {
                    const LabelId sum = sum_label(a.label, b.label);
                    out.push_back(SubStep{sum, concat(a.slice, b.slice)});
                }
            }
            break;
        }
        default:
            for (auto& s : steps(node.children[0], c)) {
                if (auto l = rewrite(nodes_[index], s.label)) {
                    out.push_back(SubStep{*l, std::move(s.slice)});
                }
            }
        }
        return out;
    }

    LabelId sum_label(LabelId a, LabelId b) {
        const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
        auto it = sums_.find(key);
        if (it != sums_.end()) {
            return it->second;
        }
        const LabelId l = labels_.intern(labels_.get(a) + labels_.get(b));
        sums_.emplace(key, l);
        return l;
    }

    LabelTable labels_;
    std::vector<LeafEngine> leaves_;
    std::vector<CompiledNode> nodes_;
    std::size_t root_ = 0;
    std::unordered_map<std::uint64_t, LabelId> sums_;
};

} // namespace

Lts explore_composition(const CompositionExpr& e, const Limits& limits) {
    const auto problems = validate_composition(e);
    if (!problems.empty()) {
        throw ValidationError("invalid composition: " + problems.front());
    }
    CompositionEngine engine(e, limits);
    LtsBuilder builder;
    std::unordered_map<Composite, StateId, CompositeHash> ids;
    std::deque<Composite> frontier;

    auto lookup = [&](const Composite& s) -> StateId {
        auto it = ids.find(s);
        if (it != ids.end()) {
            return it->second;
        }
        if (builder.num_states() >= limits.max_states) {
            throw LimitExceeded(LimitExceeded::Kind::States, builder.snapshot());
        }
        const StateId id = builder.add_state(engine.describe(s));
        ids.emplace(s, id);
        frontier.push_back(s);
        return id;
    };

    builder.set_initial(lookup(engine.initial()));
    StateId current = 0;
    while (!frontier.empty()) {
        const Composite s = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& step : engine.successors(s)) {
            const StateId dst = lookup(step.slice);
            builder.add_transition(current, engine.label(step.label), dst);
            if (builder.num_transitions() > limits.max_transitions) {
                throw LimitExceeded(LimitExceeded::Kind::Transitions, builder.snapshot());
            }
        }
        ++current;
    }
    if (engine.truncated()) {
        builder.add_warning(truncation_warning(limits.nat_bound));
    }
    return std::move(builder).build();
}

} // namespace lpecleave

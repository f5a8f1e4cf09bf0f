// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include "lpecleave/lts.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace lpecleave {

// ---------------------------------------------------------------------------
// Multi-actions

MultiActionValue::MultiActionValue(std::vector<ActionValue> factors) : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end());
}

std::size_t MultiActionValue::multiplicity(const ActionValue& a) const {
    auto [lo, hi] = std::equal_range(factors_.begin(), factors_.end(), a);
    return static_cast<std::size_t>(hi - lo);
}

MultiActionValue operator+(const MultiActionValue& a, const MultiActionValue& b) {
    MultiActionValue out;
    out.factors_.reserve(a.size() + b.size());
    std::merge(a.factors_.begin(), a.factors_.end(), b.factors_.begin(), b.factors_.end(), std::back_inserter(out.factors_));
    return out;
}

std::string to_string(const MultiActionValue& m) {
    if (m.is_tau()) {
        return "tau";
    }
    std::string out;
    bool first = true;
    for (const auto& f : m.factors()) {
        if (!first) {
            out += '|';
        }
        first = false;
        out += f.label;
        if (!f.args.empty()) {
            out += '(';
            for (std::size_t i = 0; i < f.args.size(); ++i) {
                if (i > 0) {
                    out += ',';
                }
                out += f.args[i];
            }
            out += ')';
        }
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool is_name(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '#';
    });
}

ActionValue parse_factor(std::string_view text) {
    text = trim(text);
    ActionValue a;
    const auto open = text.find('(');
    if (open == std::string_view::npos) {
        if (!is_name(text)) {
            throw Error("malformed action '" + std::string(text) + "'");
        }
        a.label = std::string(text);
        return a;
    }
    if (text.back() != ')') {
        throw Error("missing ')' in action '" + std::string(text) + "'");
    }
    a.label = std::string(trim(text.substr(0, open)));
    if (!is_name(a.label)) {
        throw Error("malformed action label in '" + std::string(text) + "'");
    }
    std::string_view inner = text.substr(open + 1, text.size() - open - 2);
    std::size_t start = 0;
    while (true) {
        const auto comma = inner.find(',', start);
        auto arg = trim(inner.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!is_name(arg)) {
            throw Error("malformed argument in '" + std::string(text) + "'");
        }
        a.args.emplace_back(arg);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return a;
}

} // namespace

MultiActionValue parse_multi_action(std::string_view text) {
    text = trim(text);
    if (text == "tau") {
        return {};
    }
    std::vector<ActionValue> factors;
    std::size_t start = 0;
    while (true) {
        const auto bar = text.find('|', start);
        factors.push_back(parse_factor(text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start)));
        if (bar == std::string_view::npos) {
            break;
        }
        start = bar + 1;
    }
    return MultiActionValue(std::move(factors));
}

std::size_t MultiActionHash::operator()(const MultiActionValue& m) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::size_t v) { h = (h ^ v) * 0x100000001b3ULL; };
    std::hash<std::string> hs;
    for (const auto& f : m.factors()) {
        mix(hs(f.label));
        for (const auto& a : f.args) {
            mix(hs(a));
        }
        mix(f.args.size());
    }
    return h;
}

// ---------------------------------------------------------------------------
// Lts and builder

void Lts::add_warning(std::string w) {
    if (std::find(warnings_.begin(), warnings_.end(), w) == warnings_.end()) {
        warnings_.push_back(std::move(w));
    }
}

std::vector<std::vector<std::pair<LabelId, StateId>>> Lts::successors() const {
    std::vector<std::vector<std::pair<LabelId, StateId>>> out(num_states_);
    for (const auto& t : transitions_) {
        out[t.src].emplace_back(t.label, t.dst);
    }
    return out;
}

std::size_t LtsBuilder::TransitionHash::operator()(const Transition& t) const {
    std::uint64_t h = t.src;
    h = h * 0x9E3779B97F4A7C15ULL + t.label;
    h = h * 0x9E3779B97F4A7C15ULL + t.dst;
    return static_cast<std::size_t>(h ^ (h >> 29));
}

StateId LtsBuilder::add_state(std::string name) {
    const auto id = static_cast<StateId>(lts_.num_states_++);
    if (!name.empty()) {
        lts_.state_names_.resize(lts_.num_states_);
        lts_.state_names_[id] = std::move(name);
    }
    return id;
}

LabelId LtsBuilder::intern(const MultiActionValue& m) {
    auto [it, inserted] = label_ids_.try_emplace(m, static_cast<LabelId>(lts_.labels_.size()));
    if (inserted) {
        lts_.labels_.push_back(m);
    }
    return it->second;
}

bool LtsBuilder::add_transition(StateId src, LabelId label, StateId dst) {
    const Transition t{src, label, dst};
    if (!seen_.insert(t).second) {
        return false;
    }
    lts_.transitions_.push_back(t);
    return true;
}

Lts LtsBuilder::build() && {
    if (lts_.num_states_ == 0) {
        throw Error("an LTS needs at least one state");
    }
    if (lts_.initial_ >= lts_.num_states_) {
        throw Error("initial state out of range");
    }
    for (const auto& t : lts_.transitions_) {
        if (t.src >= lts_.num_states_ || t.dst >= lts_.num_states_ || t.label >= lts_.labels_.size()) {
            throw Error("transition endpoint out of range");
        }
    }
    if (!lts_.state_names_.empty()) {
        lts_.state_names_.resize(lts_.num_states_);
    }
    seen_.clear();
    label_ids_.clear();
    return std::move(lts_);
}

// ---------------------------------------------------------------------------
// Partition refinement

namespace {

using Successors = std::vector<std::vector<std::pair<LabelId, StateId>>>;

/// Runs signature refinement to the fixpoint. Entry k of the result is the
/// partition after k rounds; the last entry is the coarsest bisimulation.
/// Blocks are numbered by first occurrence in state order.
std::vector<std::vector<StateId>> refine(const Successors& succ, bool keep_history) {
    const std::size_t n = succ.size();
    std::vector<std::vector<StateId>> history;
    std::vector<StateId> block(n, 0);
    std::size_t num_blocks = n == 0 ? 0 : 1;
    history.push_back(block);

    std::vector<std::pair<LabelId, StateId>> sig;
    while (true) {
        std::map<std::pair<StateId, std::vector<std::pair<LabelId, StateId>>>, StateId> ids;
        std::vector<StateId> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            sig.clear();
            for (const auto& [label, dst] : succ[s]) {
                sig.emplace_back(label, block[dst]);
            }
            std::sort(sig.begin(), sig.end());
            sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            auto [it, inserted] = ids.try_emplace({block[s], sig}, static_cast<StateId>(ids.size()));
            next[s] = it->second;
        }
        const bool stable = ids.size() == num_blocks;
        num_blocks = ids.size();
        block = std::move(next);
        if (stable) {
            break;
        }
        if (keep_history) {
            history.push_back(block);
        }
    }
    if (keep_history) {
        if (history.back() != block) {
            history.push_back(block);
        }
    } else {
        history.back() = block;
    }
    return history;
}

} // namespace

std::vector<StateId> bisimulation_partition(const Lts& l) { return refine(l.successors(), false).back(); }

Minimised minimise_bisim(const Lts& l) {
    const auto succ = l.successors();
    const auto block = refine(succ, false).back();
    const std::size_t num_blocks = block.empty() ? 0 : *std::max_element(block.begin(), block.end()) + 1;

    // Representative: the smallest member of each block. All members have
    // the same signature, so its transitions describe the whole block.
    std::vector<StateId> rep(num_blocks, static_cast<StateId>(-1));
    for (std::size_t s = 0; s < block.size(); ++s) {
        if (rep[block[s]] == static_cast<StateId>(-1)) {
            rep[block[s]] = static_cast<StateId>(s);
        }
    }

    // Renumber blocks breadth-first from the initial block.
    constexpr StateId kUnset = static_cast<StateId>(-1);
    std::vector<StateId> renumber(num_blocks, kUnset);
    std::vector<StateId> order;
    order.reserve(num_blocks);
    auto visit = [&](StateId b) {
        if (renumber[b] == kUnset) {
            renumber[b] = static_cast<StateId>(order.size());
            order.push_back(b);
        }
    };
    visit(block[l.initial()]);
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (const auto& [label, dst] : succ[rep[order[head]]]) {
            visit(block[dst]);
        }
        if (head + 1 == order.size()) {
            // Unreachable blocks, by smallest member.
            for (std::size_t s = 0; s < block.size() && order.size() == head + 1; ++s) {
                visit(block[s]);
            }
        }
    }

    LtsBuilder builder;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const StateId r = rep[order[i]];
        builder.add_state(r < l.state_names().size() ? l.state_names()[r] : std::string{});
    }
    builder.set_initial(0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (const auto& [label, dst] : succ[rep[order[i]]]) {
            builder.add_transition(static_cast<StateId>(i), l.label(label), renumber[block[dst]]);
        }
    }
    for (const auto& w : l.warnings()) {
        builder.add_warning(w);
    }

    Minimised out;
    out.quotient = std::move(builder).build();
    out.partition.resize(block.size());
    for (std::size_t s = 0; s < block.size(); ++s) {
        out.partition[s] = renumber[block[s]];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bisimilarity

namespace {

struct DisjointUnion {
    Successors succ;
    std::vector<MultiActionValue> labels;
    StateId init_a = 0;
    StateId init_b = 0;
};

DisjointUnion disjoint_union(const Lts& a, const Lts& b) {
    LtsBuilder labels;
    DisjointUnion u;
    u.succ.resize(a.num_states() + b.num_states());
    const auto offset = static_cast<StateId>(a.num_states());
    for (const auto& t : a.transitions()) {
        u.succ[t.src].emplace_back(labels.intern(a.label(t.label)), t.dst);
    }
    for (const auto& t : b.transitions()) {
        u.succ[offset + t.src].emplace_back(labels.intern(b.label(t.label)), offset + t.dst);
    }
    u.labels = labels.snapshot().labels();
    u.init_a = a.initial();
    u.init_b = offset + b.initial();
    return u;
}

class WitnessSearch {
  public:
    WitnessSearch(const Successors& succ, const std::vector<std::vector<StateId>>& history)
        : succ_(succ), history_(history) {}

    /// Round in which p and q were first separated; 0 if never.
    std::size_t level(StateId p, StateId q) const {
        for (std::size_t k = 0; k < history_.size(); ++k) {
            if (history_[k][p] != history_[k][q]) {
                return k;
            }
        }
        return 0;
    }

    std::vector<LabelId> run(StateId p, StateId q) const {
        std::vector<LabelId> trace;
        while (true) {
            const std::size_t k = level(p, q);
            if (k == 0) {
                return trace;
            }
            const auto& prev = history_[k - 1];
            // Find a step of one side whose target block (at round k-1) the
            // other side cannot match under the same label.
            bool swapped = false;
            std::optional<std::pair<LabelId, StateId>> step = unmatched(p, q, prev);
            if (!step) {
                step = unmatched(q, p, prev);
                swapped = true;
            }
            if (!step) {
                return trace;
            }
            trace.push_back(step->first);
            const StateId mover = step->second;
            const StateId other = swapped ? p : q;
            std::optional<StateId> reply;
            std::size_t best_level = 0;
            for (const auto& [label, dst] : succ_[other]) {
                if (label != step->first) {
                    continue;
                }
                const std::size_t lv = level(mover, dst);
                if (!reply || lv < best_level) {
                    reply = dst;
                    best_level = lv;
                }
            }
            if (!reply) {
                return trace;
            }
            p = swapped ? *reply : mover;
            q = swapped ? mover : *reply;
        }
    }

  private:
    std::optional<std::pair<LabelId, StateId>> unmatched(StateId p, StateId q, const std::vector<StateId>& prev) const {
        for (const auto& [label, dst] : succ_[p]) {
            bool matched = false;
            for (const auto& [l2, d2] : succ_[q]) {
                if (l2 == label && prev[d2] == prev[dst]) {
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                return std::make_pair(label, dst);
            }
        }
        return std::nullopt;
    }

    const Successors& succ_;
    const std::vector<std::vector<StateId>>& history_;
};

} // namespace

BisimResult check_bisim(const Lts& a, const Lts& b) {
    const auto u = disjoint_union(a, b);
    const auto history = refine(u.succ, true);
    BisimResult result;
    result.bisimilar = history.back()[u.init_a] == history.back()[u.init_b];
    if (!result.bisimilar) {
        for (LabelId id : WitnessSearch(u.succ, history).run(u.init_a, u.init_b)) {
            result.witness.push_back(u.labels[id]);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Isomorphism (backtracking, pruned by bisimulation classes of the union)

namespace {

class IsoSearch {
  public:
    IsoSearch(const Lts& a, const Lts& b) : a_(a), b_(b) {
        const auto u = disjoint_union(a, b);
        cls_ = refine(u.succ, false).back();
        offset_ = static_cast<StateId>(a.num_states());
        // Canonical outgoing sets, keyed by union label ids.
        out_.resize(u.succ.size());
        for (std::size_t s = 0; s < u.succ.size(); ++s) {
            out_[s] = u.succ[s];
            std::sort(out_[s].begin(), out_[s].end());
        }
        map_.assign(a.num_states(), kUnset);
        used_.assign(b.num_states(), false);
    }

    bool run() {
        if (a_.num_states() != b_.num_states() || a_.num_transitions() != b_.num_transitions()) {
            return false;
        }
        return extend(0);
    }

  private:
    static constexpr StateId kUnset = static_cast<StateId>(-1);

    bool consistent(StateId s, StateId t) const {
        if (cls_[s] != cls_[offset_ + t] || out_[s].size() != out_[offset_ + t].size()) {
            return false;
        }
        if ((s == a_.initial()) != (t == b_.initial())) {
            return false;
        }
        // Every already-mapped edge must be preserved.
        for (const auto& [label, dst] : out_[s]) {
            if (map_[dst] == kUnset) {
                continue;
            }
            const std::pair<LabelId, StateId> image{label, offset_ + map_[dst]};
            if (!std::binary_search(out_[offset_ + t].begin(), out_[offset_ + t].end(), image)) {
                return false;
            }
        }
        return true;
    }

    bool verify() const {
        for (std::size_t s = 0; s < map_.size(); ++s) {
            std::vector<std::pair<LabelId, StateId>> image;
            for (const auto& [label, dst] : out_[s]) {
                image.emplace_back(label, offset_ + map_[dst]);
            }
            std::sort(image.begin(), image.end());
            if (image != out_[offset_ + map_[s]]) {
                return false;
            }
        }
        return true;
    }

    bool extend(std::size_t s) {
        if (s == map_.size()) {
            return verify();
        }
        for (StateId t = 0; t < b_.num_states(); ++t) {
            if (used_[t] || !consistent(static_cast<StateId>(s), t)) {
                continue;
            }
            map_[s] = t;
            used_[t] = true;
            if (extend(s + 1)) {
                return true;
            }
            map_[s] = kUnset;
            used_[t] = false;
        }
        return false;
    }

    const Lts& a_;
    const Lts& b_;
    std::vector<StateId> cls_;
    StateId offset_ = 0;
    std::vector<std::vector<std::pair<LabelId, StateId>>> out_;
    std::vector<StateId> map_;
    std::vector<bool> used_;
};

} // namespace

bool isomorphic(const Lts& a, const Lts& b) { return IsoSearch(a, b).run(); }

// ---------------------------------------------------------------------------
// AUT

void write_aut(const Lts& l, std::ostream& os) {
    os << "des (" << l.initial() << ", " << l.num_transitions() << ", " << l.num_states() << ")\n";
    for (const auto& t : l.transitions()) {
        os << '(' << t.src << ",\"" << to_string(l.label(t.label)) << "\"," << t.dst << ")\n";
    }
}

namespace {

std::uint64_t parse_number(std::string_view s, std::size_t line, const char* what) {
    s = trim(s);
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw MalformedAut(line, std::string("expected a number for ") + what);
    }
    try {
        return std::stoull(std::string(s));
    } catch (const std::out_of_range&) {
        throw MalformedAut(line, std::string("number out of range for ") + what);
    }
}

std::string_view strip_parens(std::string_view s, std::size_t line) {
    s = trim(s);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
        throw MalformedAut(line, "expected a parenthesised tuple");
    }
    return s.substr(1, s.size() - 2);
}

} // namespace

Lts read_aut(std::istream& is) {
    std::string text;
    std::size_t line_no = 0;
    bool have_header = false;
    std::uint64_t initial = 0;
    std::uint64_t num_transitions = 0;
    std::uint64_t num_states = 0;
    LtsBuilder builder;
    std::size_t seen_transitions = 0;

    while (std::getline(is, text)) {
        ++line_no;
        std::string_view line = trim(text);
        if (line.empty()) {
            continue;
        }
        if (!have_header) {
            if (line.substr(0, 3) != "des") {
                throw MalformedAut(line_no, "expected 'des' header");
            }
            auto body = strip_parens(line.substr(3), line_no);
            const auto c1 = body.find(',');
            const auto c2 = c1 == std::string_view::npos ? c1 : body.find(',', c1 + 1);
            if (c2 == std::string_view::npos) {
                throw MalformedAut(line_no, "header needs three fields");
            }
            initial = parse_number(body.substr(0, c1), line_no, "initial state");
            num_transitions = parse_number(body.substr(c1 + 1, c2 - c1 - 1), line_no, "transition count");
            num_states = parse_number(body.substr(c2 + 1), line_no, "state count");
            if (num_states == 0 || initial >= num_states) {
                throw MalformedAut(line_no, "initial state out of range");
            }
            for (std::uint64_t s = 0; s < num_states; ++s) {
                builder.add_state();
            }
            builder.set_initial(static_cast<StateId>(initial));
            have_header = true;
            continue;
        }
        auto body = strip_parens(line, line_no);
        const auto first = body.find(',');
        const auto last = body.rfind(',');
        if (first == std::string_view::npos || first == last) {
            throw MalformedAut(line_no, "transition needs three fields");
        }
        const auto src = parse_number(body.substr(0, first), line_no, "source state");
        const auto dst = parse_number(body.substr(last + 1), line_no, "target state");
        auto label = trim(body.substr(first + 1, last - first - 1));
        if (label.size() >= 2 && label.front() == '"' && label.back() == '"') {
            label = label.substr(1, label.size() - 2);
        }
        if (src >= num_states || dst >= num_states) {
            throw MalformedAut(line_no, "state out of range");
        }
        MultiActionValue m;
        try {
            m = parse_multi_action(label);
        } catch (const Error& e) {
            throw MalformedAut(line_no, e.what());
        }
        builder.add_transition(static_cast<StateId>(src), m, static_cast<StateId>(dst));
        ++seen_transitions;
    }
    if (!have_header) {
        throw MalformedAut(line_no + 1, "missing 'des' header");
    }
    if (seen_transitions != num_transitions) {
        throw MalformedAut(line_no, "header announces " + std::to_string(num_transitions) + " transitions, found " +
                                        std::to_string(seen_transitions));
    }
    return std::move(builder).build();
}

} // namespace lpecleave

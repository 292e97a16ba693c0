#pragma once

// Generalized counting over views.
//
// The stabilizing algorithm scans for the first level of the view whose
// nodes all have exactly one child, seeds the leader's anonymity there, and
// propagates anonymities across exposed pairs; its output may be wrong
// early on but is correct from round 2n-2 onward.
//
// The terminating algorithm assigns guesses to nodes from counted
// "guessers", confirms the deepest heavy node on the guessed path, fills in
// complete isles, and terminates once a counting cut C of total anonymity
// n' is old enough (view depth >= deepest cut level + n'). It never
// terminates with a wrong inventory.
//
// Both are pure functions of a view; per-iteration hooks expose the
// terminating algorithm's internals to tests and the CLI trace dump.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "histree/execution.hpp"
#include "histree/history_tree.hpp"
#include "histree/model.hpp"
#include "histree/view.hpp"

namespace histree {

struct CountingOutput {
    std::optional<Inventory> inventory;  // empty = Unknown

    bool unknown() const { return !inventory.has_value(); }
    friend bool operator==(const CountingOutput&, const CountingOutput&) = default;
};

// Two same-level nodes, each with exactly one child, whose children carry
// mutual red edges back to the other node. Knowing one anonymity determines
// the other: a(first) * mult_first == a(second) * mult_second.
struct ExposedPair {
    NodeId first = kNoNode;
    NodeId second = kNoNode;
    int mult_first = 0;   // multiplicity of {child(first), second}
    int mult_second = 0;  // multiplicity of {child(second), first}
};

// All exposed pairs at `level`, normalized and ordered by canonical rank.
inline std::vector<ExposedPair> find_exposed_pairs(const HistoryTree& tree, int level,
                                                   const std::vector<int>& ranks) {
    std::vector<NodeId> by_rank(tree.level(level).size(), kNoNode);
    for (NodeId id : tree.level(level))
        by_rank[static_cast<std::size_t>(ranks[static_cast<std::size_t>(id)])] = id;

    std::vector<ExposedPair> pairs;
    for (std::size_t i = 0; i < by_rank.size(); ++i) {
        const auto& a = tree.node(by_rank[i]);
        if (a.children.size() != 1) continue;
        for (std::size_t j = i + 1; j < by_rank.size(); ++j) {
            const auto& b = tree.node(by_rank[j]);
            if (b.children.size() != 1) continue;
            int m1 = tree.node(a.children.front()).red_multiplicity(by_rank[j]);
            int m2 = tree.node(b.children.front()).red_multiplicity(by_rank[i]);
            if (m1 >= 1 && m2 >= 1)
                pairs.push_back({by_rank[i], by_rank[j], m1, m2});
        }
    }
    return pairs;
}

inline std::vector<ExposedPair> find_exposed_pairs(const View& view, int level) {
    return find_exposed_pairs(view.tree, level, canonical_ranks(view.tree));
}

inline CountingOutput stabilizing_count(const View& view) {
    const auto& tree = view.tree;
    const auto ranks = canonical_ranks(tree);
    for (int t = 0; t <= tree.depth(); ++t) {
        NodeId leader = kNoNode;
        bool all_non_branching = true;
        for (NodeId id : tree.level(t)) {
            if (tree.is_leader_node(id)) leader = id;
            if (tree.node(id).children.size() != 1) all_non_branching = false;
        }
        if (leader == kNoNode) return {};  // no leader in sight: Unknown
        if (!all_non_branching) continue;

        std::map<NodeId, std::int64_t> anonymity;
        for (NodeId id : tree.level(t)) anonymity[id] = 0;
        anonymity[leader] = 1;

        const auto pairs = find_exposed_pairs(tree, t, ranks);
        auto ceil_div = [](std::int64_t num, std::int64_t den) {
            return (num + den - 1) / den;
        };
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& pair : pairs) {
                std::int64_t& a1 = anonymity[pair.first];
                std::int64_t& a2 = anonymity[pair.second];
                if (a1 != 0 && a2 == 0) {
                    a2 = ceil_div(a1 * pair.mult_first, pair.mult_second);
                    changed = true;
                } else if (a2 != 0 && a1 == 0) {
                    a1 = ceil_div(a2 * pair.mult_second, pair.mult_first);
                    changed = true;
                }
            }
        }

        Inventory inv;
        for (NodeId id : tree.level(t))
            if (anonymity[id] > 0) inv[tree.node(id).label] += anonymity[id];
        return {inv};
    }
    return {};
}

// Bookkeeping of one terminating-count evaluation. Arrays are indexed by
// node id; `weight` holds, for every node, the number of guessed nodes in
// its black subtree (itself included) and is kept current incrementally.
struct GuessState {
    std::vector<char> guessed;
    std::vector<char> counted;
    std::vector<std::int64_t> anonymity;  // a(v), set once counted; -1 otherwise
    std::vector<std::int64_t> guess;      // g(v), set while guessed; -1 otherwise
    std::vector<int> weight;

    explicit GuessState(std::size_t nodes)
        : guessed(nodes, 0), counted(nodes, 0), anonymity(nodes, -1), guess(nodes, -1),
          weight(nodes, 0) {}
};

struct Isle {
    NodeId root = kNoNode;
    std::vector<NodeId> leaves;     // the minimal-depth counted cut below root
    std::vector<NodeId> internals;  // strictly between root and leaves; never counted
    bool complete = false;          // anonymity(root) == sum over leaves
    bool trivial = false;           // no internal nodes
};

enum class CountedVia { leader, confirmed_guess, isle_interior };

struct CountingEvents {
    std::function<void(const GuessState&)> on_loop_head;
    std::function<void(NodeId node, NodeId guesser, std::int64_t value)> on_guess;
    std::function<void(NodeId node, std::int64_t value, CountedVia via)> on_counted;
    std::function<void(const Isle&)> on_isle;
    std::function<void(const std::vector<NodeId>& cut, int cut_level, int view_depth,
                       std::int64_t total, bool accepted)> on_cut;
};

// u is a guesser iff it is counted, all its children present in the view
// are counted, and their anonymities add up to u's own. A childless counted
// node never qualifies.
inline bool is_guesser(const View& view, const GuessState& st, NodeId u) {
    if (u == view.tree.root() || !st.counted[static_cast<std::size_t>(u)]) return false;
    std::int64_t sum = 0;
    for (NodeId child : view.tree.node(u).children) {
        if (!st.counted[static_cast<std::size_t>(child)]) return false;
        sum += st.anonymity[static_cast<std::size_t>(child)];
    }
    return sum == st.anonymity[static_cast<std::size_t>(u)];
}

// The guess a guesser u one level above v induces on v: the links between
// u's class and v's parent's class, counted through u's children, divided
// by the multiplicity of {v, u} and rounded up. Never underestimates the
// true anonymity of v.
inline std::int64_t compute_guess(const View& view, const GuessState& st, NodeId v, NodeId u) {
    const auto& tree = view.tree;
    const auto& vn = tree.node(v);
    if (vn.parent == kNoNode || tree.node(u).level != vn.level - 1)
        throw contract_error("compute_guess: guesser must sit one level above the node");
    const int m = vn.red_multiplicity(u);
    if (m < 1) throw contract_error("compute_guess: node has no red edge to the guesser");
    if (!is_guesser(view, st, u)) throw contract_error("compute_guess: node is not a guesser");

    std::int64_t numerator = 0;
    for (NodeId child : tree.node(u).children)
        numerator += st.anonymity[static_cast<std::size_t>(child)] *
                     tree.node(child).red_multiplicity(vn.parent);
    if (numerator <= 0)
        throw contract_error("compute_guess: guesser's class has no links to the parent class");
    return (numerator + m - 1) / m;
}

// The isle rooted at counted node s whose leaves are, per descending black
// path, the first counted node strictly below s. Returns nothing if some
// path reaches a view leaf without meeting a counted node.
inline std::optional<Isle> isle_of(const View& view, const GuessState& st, NodeId s) {
    if (!st.counted[static_cast<std::size_t>(s)])
        throw contract_error("isle_of: isle root must be counted");
    Isle isle;
    isle.root = s;
    std::vector<NodeId> stack(view.tree.node(s).children.begin(),
                              view.tree.node(s).children.end());
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        if (st.counted[static_cast<std::size_t>(id)]) {
            isle.leaves.push_back(id);
            continue;
        }
        const auto& n = view.tree.node(id);
        if (n.children.empty()) return std::nullopt;  // uncovered path: no counted cut
        isle.internals.push_back(id);
        stack.insert(stack.end(), n.children.begin(), n.children.end());
    }
    std::int64_t sum = 0;
    for (NodeId leaf : isle.leaves) sum += st.anonymity[static_cast<std::size_t>(leaf)];
    isle.complete = sum == st.anonymity[static_cast<std::size_t>(s)];
    isle.trivial = isle.internals.empty();
    return isle;
}

// The candidate counting cut: the minimum-depth counted ancestor of every
// counted node. Returned only if it is a cut for the root, i.e. every leaf
// of the view has a counted ancestor-or-self, and no member is redundant.
inline std::optional<std::vector<NodeId>> find_counting_cut(const View& view,
                                                            const GuessState& st) {
    const auto& tree = view.tree;
    std::vector<NodeId> cut;
    for (NodeId id = 0; id < static_cast<NodeId>(tree.nodes.size()); ++id) {
        if (!st.counted[static_cast<std::size_t>(id)]) continue;
        bool has_counted_ancestor = false;
        for (NodeId up = tree.node(id).parent; up != kNoNode; up = tree.node(up).parent)
            if (st.counted[static_cast<std::size_t>(up)]) {
                has_counted_ancestor = true;
                break;
            }
        if (!has_counted_ancestor) cut.push_back(id);
    }
    if (cut.empty()) return std::nullopt;

    std::vector<char> in_cut(tree.nodes.size(), 0);
    for (NodeId id : cut) in_cut[static_cast<std::size_t>(id)] = 1;

    // Condition (i): every root-to-leaf black path meets the cut.
    for (NodeId id = 0; id < static_cast<NodeId>(tree.nodes.size()); ++id) {
        if (!tree.node(id).children.empty()) continue;
        bool covered = false;
        for (NodeId up = id; up != kNoNode; up = tree.node(up).parent)
            if (in_cut[static_cast<std::size_t>(up)]) {
                covered = true;
                break;
            }
        if (!covered) return std::nullopt;
    }

    // Condition (ii): each member owns a leaf it alone covers. Since the
    // members form an antichain, any leaf below a member qualifies; walk
    // down to confirm one exists without crossing another member.
    for (NodeId id : cut) {
        std::vector<NodeId> stack{id};
        bool owns_leaf = false;
        while (!stack.empty() && !owns_leaf) {
            NodeId cur = stack.back();
            stack.pop_back();
            if (cur != id && in_cut[static_cast<std::size_t>(cur)]) continue;
            const auto& n = tree.node(cur);
            if (n.children.empty())
                owns_leaf = true;
            else
                stack.insert(stack.end(), n.children.begin(), n.children.end());
        }
        if (!owns_leaf) return std::nullopt;
    }
    return cut;
}

namespace detail {

struct TerminatingRun {
    const View& view;
    GuessState st;
    std::vector<int> rank;
    std::vector<std::vector<NodeId>> by_rank;  // per level index (level + 1)
    const CountingEvents* events;

    TerminatingRun(const View& v, const CountingEvents* ev)
        : view(v), st(v.tree.nodes.size()), rank(canonical_ranks(v.tree)), events(ev) {
        by_rank.resize(static_cast<std::size_t>(v.tree.depth()) + 2);
        for (int t = -1; t <= v.tree.depth(); ++t) {
            auto& slot = by_rank[static_cast<std::size_t>(t + 1)];
            slot.assign(v.tree.level(t).size(), kNoNode);
            for (NodeId id : v.tree.level(t))
                slot[static_cast<std::size_t>(rank[static_cast<std::size_t>(id)])] = id;
        }
    }

    void add_weight_on_path(NodeId from, int delta) {
        for (NodeId id = from; id != kNoNode; id = view.tree.node(id).parent)
            st.weight[static_cast<std::size_t>(id)] += delta;
    }

    void mark_counted(NodeId id, std::int64_t value, CountedVia via) {
        st.anonymity[static_cast<std::size_t>(id)] = value;
        st.counted[static_cast<std::size_t>(id)] = 1;
        if (st.guessed[static_cast<std::size_t>(id)]) {
            st.guessed[static_cast<std::size_t>(id)] = 0;
            st.guess[static_cast<std::size_t>(id)] = -1;
            add_weight_on_path(id, -1);
        }
        if (events && events->on_counted) events->on_counted(id, value, via);
    }

    // Fills in every complete non-trivial isle until none is left. A newly
    // counted node can complete an isle as its root or as one of its leaves;
    // interior nodes inherit the sums of the leaves below them.
    void resolve_isles() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t lvl = 1; lvl < by_rank.size() && !changed; ++lvl) {
                for (NodeId s : by_rank[lvl]) {
                    if (!st.counted[static_cast<std::size_t>(s)]) continue;
                    auto isle = isle_of(view, st, s);
                    if (!isle || !isle->complete || isle->trivial) continue;
                    std::map<NodeId, std::int64_t> sums;
                    for (NodeId leaf : isle->leaves)
                        for (NodeId up = view.tree.node(leaf).parent; up != s;
                             up = view.tree.node(up).parent)
                            sums[up] += st.anonymity[static_cast<std::size_t>(leaf)];
                    for (const auto& [node, value] : sums)
                        mark_counted(node, value, CountedVia::isle_interior);
                    if (events && events->on_isle) events->on_isle(*isle);
                    changed = true;
                    break;
                }
            }
        }
    }

    // Smallest-depth non-counted guessable node in an unlocked level, with
    // its minimal-rank guesser; ties broken by canonical rank.
    struct Pick {
        NodeId node = kNoNode;
        NodeId guesser = kNoNode;
    };
    std::optional<Pick> pick_guessable() const {
        std::vector<char> guesser_cache(view.tree.nodes.size(), 0);
        for (NodeId id = 0; id < static_cast<NodeId>(view.tree.nodes.size()); ++id)
            guesser_cache[static_cast<std::size_t>(id)] = is_guesser(view, st, id) ? 1 : 0;

        for (int t = 1; t <= view.tree.depth(); ++t) {
            bool locked = false;
            for (NodeId id : view.tree.level(t))
                locked = locked || st.guessed[static_cast<std::size_t>(id)];
            if (locked) continue;
            for (NodeId v : by_rank[static_cast<std::size_t>(t + 1)]) {
                if (st.counted[static_cast<std::size_t>(v)]) continue;
                NodeId best_guesser = kNoNode;
                for (const auto& [u, mult] : view.tree.node(v).red_up) {
                    if (!guesser_cache[static_cast<std::size_t>(u)]) continue;
                    if (best_guesser == kNoNode ||
                        rank[static_cast<std::size_t>(u)] <
                            rank[static_cast<std::size_t>(best_guesser)])
                        best_guesser = u;
                }
                if (best_guesser != kNoNode) return Pick{v, best_guesser};
            }
        }
        return std::nullopt;
    }

    CountingOutput run() {
        for (NodeId id = 0; id < static_cast<NodeId>(view.tree.nodes.size()); ++id)
            if (view.tree.is_leader_node(id)) mark_counted(id, 1, CountedVia::leader);
        resolve_isles();

        const std::size_t iteration_cap = view.tree.nodes.size() + 1;
        for (std::size_t iteration = 0;; ++iteration) {
            if (iteration > iteration_cap)
                throw contract_error("terminating count failed to make progress");
            if (events && events->on_loop_head) events->on_loop_head(st);
            auto pick = pick_guessable();
            if (!pick) break;

            NodeId v = pick->node;
            std::int64_t g = compute_guess(view, st, v, pick->guesser);
            st.guessed[static_cast<std::size_t>(v)] = 1;
            st.guess[static_cast<std::size_t>(v)] = g;
            add_weight_on_path(v, +1);
            if (events && events->on_guess) events->on_guess(v, pick->guesser, g);

            // Deepest heavy node on the black path from v to the root.
            NodeId heavy = kNoNode;
            for (NodeId id = v; id != kNoNode; id = view.tree.node(id).parent) {
                if (st.guessed[static_cast<std::size_t>(id)] &&
                    st.weight[static_cast<std::size_t>(id)] >=
                        st.guess[static_cast<std::size_t>(id)]) {
                    heavy = id;
                    break;
                }
            }
            if (heavy != kNoNode) {
                mark_counted(heavy, st.guess[static_cast<std::size_t>(heavy)],
                             CountedVia::confirmed_guess);
                resolve_isles();
            }
        }

        auto cut = find_counting_cut(view, st);
        if (!cut) {
            if (events && events->on_cut) events->on_cut({}, -1, view.depth(), 0, false);
            return {};
        }
        int cut_level = -1;
        std::int64_t total = 0;
        for (NodeId id : *cut) {
            cut_level = std::max(cut_level, view.tree.node(id).level);
            total += st.anonymity[static_cast<std::size_t>(id)];
        }
        const bool accepted = view.depth() >= cut_level + total;
        if (events && events->on_cut)
            events->on_cut(*cut, cut_level, view.depth(), total, accepted);
        if (!accepted) return {};

        Inventory inv;
        for (NodeId id : *cut)
            inv[view.tree.node(id).label] += st.anonymity[static_cast<std::size_t>(id)];
        return {inv};
    }
};

}  // namespace detail

inline CountingOutput terminating_count(const View& view,
                                        const CountingEvents* events = nullptr) {
    return detail::TerminatingRun(view, events).run();
}

// ---------------------------------------------------------------------------
// Adapters running the counting algorithms under the execution engine. The
// state of a process is its history; messages are whole histories. A process
// that has terminated keeps merging and forwarding its history (so others
// can still finish) but its decided output is frozen.

struct StabilizingCounting {
    struct State {
        std::shared_ptr<const View> view;
        CountingOutput out;
    };
    using Output = CountingOutput;

    State init(const ProcessInput& input) const {
        auto view = std::make_shared<const View>(initial_view(input));
        auto out = stabilizing_count(*view);
        return {std::move(view), std::move(out)};
    }
    State step(const State& prev, const Received<State>& received) const {
        std::vector<std::pair<const View*, int>> views;
        views.reserve(received.size());
        for (const auto& [state, mult] : received) views.emplace_back(state->view.get(), mult);
        auto merged = std::make_shared<const View>(extend_and_merge(*prev.view, views));
        auto out = stabilizing_count(*merged);
        return {std::move(merged), std::move(out)};
    }
    Output output(const State& s) const { return s.out; }
    bool is_terminal(const State&) const { return false; }
};

struct TerminatingCounting {
    struct State {
        std::shared_ptr<const View> view;
        CountingOutput out;
        bool terminal = false;
    };
    using Output = CountingOutput;

    State init(const ProcessInput& input) const {
        auto view = std::make_shared<const View>(initial_view(input));
        auto out = terminating_count(*view);
        bool terminal = !out.unknown();
        return {std::move(view), std::move(out), terminal};
    }
    State step(const State& prev, const Received<State>& received) const {
        std::vector<std::pair<const View*, int>> views;
        views.reserve(received.size());
        for (const auto& [state, mult] : received) views.emplace_back(state->view.get(), mult);
        auto merged = std::make_shared<const View>(extend_and_merge(*prev.view, views));
        if (prev.terminal) return {std::move(merged), prev.out, true};
        auto out = terminating_count(*merged);
        bool terminal = !out.unknown();
        return {std::move(merged), std::move(out), terminal};
    }
    Output output(const State& s) const { return s.out; }
    bool is_terminal(const State& s) const { return s.terminal; }
};

}  // namespace histree

#pragma once

// Views: the finite sub-history a process actually knows. A view is the
// subgraph induced by all ascending black/red paths from one node (the
// viewpoint) to the root; it is the entire internal state of a process.
//
// This header provides
//   - view_of:          extract a view from a ground-truth tree,
//   - canonical_form:   a total encoding, equal iff views are isomorphic,
//   - extend_and_merge: the local update a process runs each round, merging
//                       its own view with the views it received.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "histree/history_tree.hpp"
#include "histree/model.hpp"

namespace histree {

struct View {
    HistoryTree tree;
    NodeId viewpoint = kNoNode;

    int depth() const { return tree.depth(); }  // equals the round of the history
};

// Fresh history of a process at round 0: the root plus one level-0 node.
inline View initial_view(const ProcessInput& input) {
    View v;
    v.tree.add_root();
    v.viewpoint = v.tree.add_node(0, v.tree.root(), input);
    return v;
}

// The sub-history closed under ascending paths from `origin`, with `origin`
// as viewpoint. If `source_map` is given, it receives, per view node id, the
// ground-truth node id it came from (used by instrumented tests).
inline View view_of(const GroundTruth& gt, NodeId origin,
                    std::vector<NodeId>* source_map = nullptr) {
    std::vector<char> included(gt.tree.nodes.size(), 0);
    std::vector<NodeId> stack{origin};
    included[static_cast<std::size_t>(origin)] = 1;
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        const auto& n = gt.tree.node(id);
        auto push = [&](NodeId up) {
            if (up != kNoNode && !included[static_cast<std::size_t>(up)]) {
                included[static_cast<std::size_t>(up)] = 1;
                stack.push_back(up);
            }
        };
        push(n.parent);
        for (const auto& [target, mult] : n.red_up) push(target);
    }

    // Ground-truth ids are already grouped level by level in creation order;
    // keep that order so the extraction is deterministic.
    std::vector<NodeId> ordered;
    for (int t = -1; t <= gt.tree.depth(); ++t)
        for (NodeId id : gt.tree.level(t))
            if (included[static_cast<std::size_t>(id)]) ordered.push_back(id);

    std::vector<NodeId> remap(gt.tree.nodes.size(), kNoNode);
    View view;
    if (source_map) source_map->clear();
    for (NodeId id : ordered) {
        const auto& n = gt.tree.node(id);
        NodeId copy;
        if (id == gt.tree.root()) {
            copy = view.tree.add_root();
        } else {
            copy = view.tree.add_node(n.level, remap[static_cast<std::size_t>(n.parent)], n.label);
            std::vector<std::pair<NodeId, int>> red;
            red.reserve(n.red_up.size());
            for (const auto& [target, mult] : n.red_up)
                red.emplace_back(remap[static_cast<std::size_t>(target)], mult);
            view.tree.set_red_up(copy, std::move(red));
        }
        remap[static_cast<std::size_t>(id)] = copy;
        if (source_map) source_map->push_back(id);
    }
    view.viewpoint = remap[static_cast<std::size_t>(origin)];
    return view;
}

namespace detail {

// Per-node signature used for canonical ordering: the parent's rank in the
// previous level, the label, and the full multiset of red edges into the
// previous level written in ranks. In a history tree of a network, two
// same-level nodes never share a signature: siblings are distinct classes
// of observations, and nodes always carry their complete incoming edges.
using NodeSignature = std::tuple<int, ProcessInput, std::vector<std::pair<int, int>>>;

inline NodeSignature node_signature(const HistoryTree& tree, NodeId id,
                                    const std::vector<int>& rank) {
    const auto& n = tree.node(id);
    std::vector<std::pair<int, int>> red;
    red.reserve(n.red_up.size());
    for (const auto& [target, mult] : n.red_up)
        red.emplace_back(rank[static_cast<std::size_t>(target)], mult);
    std::sort(red.begin(), red.end());
    return {n.parent == kNoNode ? -1 : rank[static_cast<std::size_t>(n.parent)], n.label,
            std::move(red)};
}

inline void append_escaped(std::string& out, const ProcessInput& label) {
    out += label.leader ? 'L' : 'N';
    out += std::to_string(label.value.size());
    out += ':';
    out += label.value;
}

}  // namespace detail

// Rank of every node within its level under the canonical order. Total and
// deterministic; independent of node insertion order.
inline std::vector<int> canonical_ranks(const HistoryTree& tree) {
    std::vector<int> rank(tree.nodes.size(), 0);
    for (int t = 0; t <= tree.depth(); ++t) {
        const auto& ids = tree.level(t);
        std::vector<std::pair<detail::NodeSignature, NodeId>> order;
        order.reserve(ids.size());
        for (NodeId id : ids) order.emplace_back(detail::node_signature(tree, id, rank), id);
        std::sort(order.begin(), order.end());
        for (std::size_t i = 0; i + 1 < order.size(); ++i)
            if (order[i].first == order[i + 1].first)
                throw contract_error(
                    "canonical ordering: two same-level nodes share parent, label and "
                    "observation edges; structure is not a history of a network");
        for (std::size_t i = 0; i < order.size(); ++i)
            rank[static_cast<std::size_t>(order[i].second)] = static_cast<int>(i);
    }
    return rank;
}

// Total deterministic byte encoding, invariant under node renaming; two
// views encode equally iff they are isomorphic as labeled red/black
// leveled structures.
inline std::string canonical_form(const View& view) {
    const auto rank = canonical_ranks(view.tree);
    std::string out;
    for (int t = 0; t <= view.tree.depth(); ++t) {
        const auto& ids = view.tree.level(t);
        std::vector<NodeId> by_rank(ids.size());
        for (NodeId id : ids) by_rank[static_cast<std::size_t>(rank[static_cast<std::size_t>(id)])] = id;
        out += '|';
        for (NodeId id : by_rank) {
            const auto& n = view.tree.node(id);
            out += '(';
            out += std::to_string(t == 0 ? -1 : rank[static_cast<std::size_t>(n.parent)]);
            out += ';';
            detail::append_escaped(out, n.label);
            std::vector<std::pair<int, int>> red;
            for (const auto& [target, mult] : n.red_up)
                red.emplace_back(rank[static_cast<std::size_t>(target)], mult);
            std::sort(red.begin(), red.end());
            for (const auto& [r, m] : red) {
                out += ' ';
                out += std::to_string(r);
                out += 'x';
                out += std::to_string(m);
            }
            out += ')';
        }
    }
    return out;
}

inline bool views_isomorphic(const View& a, const View& b) {
    if (a.depth() != b.depth()) return false;
    return canonical_form(a) == canonical_form(b);
}

// One round of the local history update. `own` is the process's history of
// the previous round; `received` holds the histories observed through the
// round's links, with their link multiplicities. Returns the history of the
// next round: `own` extended by a fresh viewpoint child, every received
// view folded in, and one new red edge per distinct received history.
//
// When folding a received view we walk its nodes level by level and map
// each onto a child of the already-mapped parent whose label matches and
// whose complete set of red edges equals the mapped image of the node's
// own complete set. Matching on anything less can conflate two sibling
// classes whose observations differ only outside the received view, so
// both sides of the comparison use the full edge sets.
inline View extend_and_merge(const View& own,
                             const std::vector<std::pair<const View*, int>>& received) {
    if (own.viewpoint == kNoNode || own.tree.node(own.viewpoint).level < 0)
        throw contract_error("extend_and_merge: own view has no usable viewpoint");
    const int round_depth = own.depth();
    for (const auto& [view, mult] : received) {
        if (view->depth() != round_depth)
            throw protocol_error("received a history of depth " +
                                 std::to_string(view->depth()) + ", expected " +
                                 std::to_string(round_depth));
        if (mult <= 0) throw contract_error("received multiplicity must be positive");
    }

    View result;
    result.tree = own.tree;
    const NodeId old_viewpoint = own.viewpoint;
    result.viewpoint = result.tree.add_node(round_depth + 1, old_viewpoint,
                                            own.tree.node(old_viewpoint).label);

    // Group identical received histories; process them in canonical order so
    // the merge is independent of arrival order.
    std::map<std::string, std::pair<const View*, int>> distinct;
    for (const auto& [view, mult] : received) {
        auto [it, inserted] = distinct.try_emplace(canonical_form(*view), view, mult);
        if (!inserted) it->second.second += mult;
    }

    std::map<NodeId, int> viewpoint_edges;
    for (const auto& [form, entry] : distinct) {
        const View& incoming = *entry.first;
        const auto rank = canonical_ranks(incoming.tree);
        std::vector<NodeId> mapped(incoming.tree.nodes.size(), kNoNode);
        mapped[static_cast<std::size_t>(incoming.tree.root())] = result.tree.root();

        for (int t = 0; t <= incoming.tree.depth(); ++t) {
            std::vector<NodeId> by_rank(incoming.tree.level(t).size());
            for (NodeId id : incoming.tree.level(t))
                by_rank[static_cast<std::size_t>(rank[static_cast<std::size_t>(id)])] = id;
            for (NodeId id : by_rank) {
                const auto& n = incoming.tree.node(id);
                NodeId parent_image = mapped[static_cast<std::size_t>(n.parent)];
                std::vector<std::pair<NodeId, int>> red_image;
                red_image.reserve(n.red_up.size());
                for (const auto& [target, mult] : n.red_up)
                    red_image.emplace_back(mapped[static_cast<std::size_t>(target)], mult);
                std::sort(red_image.begin(), red_image.end());

                NodeId match = kNoNode;
                for (NodeId child : result.tree.node(parent_image).children) {
                    const auto& c = result.tree.node(child);
                    if (c.label == n.label && c.red_up == red_image) {
                        if (match != kNoNode)
                            throw contract_error("merge: ambiguous node match");
                        match = child;
                    }
                }
                if (match == kNoNode) {
                    match = result.tree.add_node(n.level, parent_image, n.label);
                    result.tree.set_red_up(match, std::move(red_image));
                }
                mapped[static_cast<std::size_t>(id)] = match;
            }
        }
        viewpoint_edges[mapped[static_cast<std::size_t>(incoming.viewpoint)]] += entry.second;
    }

    result.tree.set_red_up(result.viewpoint,
                           {viewpoint_edges.begin(), viewpoint_edges.end()});
    return result;
}

}  // namespace histree

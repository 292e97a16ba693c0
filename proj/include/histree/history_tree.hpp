#pragma once

// The history tree of a dynamic network. Level t >= 0 holds one node per
// class of processes that are indistinguishable at the end of round t;
// level -1 holds the root, representing all processes. Black edges form
// the rooted tree (class refinement); red edges carry, on each node, the
// multiset of previous-level classes it received messages from, with link
// multiplicities.
//
// The same node storage backs both full ground-truth trees and the views
// that processes compute locally.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "histree/model.hpp"

namespace histree {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

struct HistoryNode {
    int level = -1;
    NodeId parent = kNoNode;
    ProcessInput label;  // meaningless for the root
    // Red edges into the previous level, sorted by target id. Every node
    // of a view carries its complete set of incoming-observation edges.
    std::vector<std::pair<NodeId, int>> red_up;
    std::vector<NodeId> children;

    int red_multiplicity(NodeId target) const {
        for (const auto& [t, m] : red_up)
            if (t == target) return m;
        return 0;
    }
};

struct HistoryTree {
    std::vector<HistoryNode> nodes;            // nodes[0] is the root
    std::vector<std::vector<NodeId>> levels_;  // levels_[i] = ids at level i-1

    NodeId root() const { return 0; }

    // Deepest level index (the root alone gives -1).
    int depth() const { return static_cast<int>(levels_.size()) - 2; }

    const std::vector<NodeId>& level(int t) const {
        static const std::vector<NodeId> empty;
        int idx = t + 1;
        if (idx < 0 || idx >= static_cast<int>(levels_.size())) return empty;
        return levels_[static_cast<std::size_t>(idx)];
    }

    const HistoryNode& node(NodeId id) const { return nodes[static_cast<std::size_t>(id)]; }
    HistoryNode& node(NodeId id) { return nodes[static_cast<std::size_t>(id)]; }

    NodeId add_root() {
        nodes.push_back(HistoryNode{});
        levels_.push_back({0});
        return 0;
    }

    NodeId add_node(int level, NodeId parent, ProcessInput label) {
        NodeId id = static_cast<NodeId>(nodes.size());
        HistoryNode n;
        n.level = level;
        n.parent = parent;
        n.label = std::move(label);
        nodes.push_back(std::move(n));
        if (parent != kNoNode) node(parent).children.push_back(id);
        while (static_cast<int>(levels_.size()) <= level + 1) levels_.emplace_back();
        levels_[static_cast<std::size_t>(level + 1)].push_back(id);
        return id;
    }

    void set_red_up(NodeId id, std::vector<std::pair<NodeId, int>> edges) {
        std::sort(edges.begin(), edges.end());
        node(id).red_up = std::move(edges);
    }

    bool is_leader_node(NodeId id) const { return id != root() && node(id).label.leader; }
};

// Ground truth for a trace: the full history tree plus, per level, the
// node representing each process, and each node's anonymity (how many
// processes it represents).
struct GroundTruth {
    HistoryTree tree;
    // rho[t + 1][p - 1] = node representing process p at level t.
    std::vector<std::vector<NodeId>> rho;
    std::vector<std::int64_t> alpha;  // per node id

    NodeId node_of(int process, int level) const {
        return rho[static_cast<std::size_t>(level + 1)][static_cast<std::size_t>(process - 1)];
    }
};

// Builds the history tree level by level: level 0 partitions processes by
// input; below that, the children of a node are the classes of its
// processes with equal observation multisets over the previous level, and
// each child's red edges record that common multiset.
inline GroundTruth build_ground_truth(const DynamicNetworkTrace& trace) {
    validate_trace(trace);
    GroundTruth gt;
    gt.tree.add_root();
    gt.alpha.push_back(trace.n);
    gt.rho.push_back(std::vector<NodeId>(static_cast<std::size_t>(trace.n), gt.tree.root()));

    // Level 0: one node per distinct input, in input order.
    {
        std::map<ProcessInput, std::vector<int>> by_input;
        for (int p = 1; p <= trace.n; ++p) by_input[trace.input_of(p)].push_back(p);
        std::vector<NodeId> rho0(static_cast<std::size_t>(trace.n), kNoNode);
        for (const auto& [input, members] : by_input) {
            NodeId id = gt.tree.add_node(0, gt.tree.root(), input);
            gt.alpha.push_back(static_cast<std::int64_t>(members.size()));
            for (int p : members) rho0[static_cast<std::size_t>(p - 1)] = id;
        }
        gt.rho.push_back(std::move(rho0));
    }

    for (int round = 1; round <= trace.rounds(); ++round) {
        const auto& snap = trace.snapshots[static_cast<std::size_t>(round - 1)];
        const auto& prev_rho = gt.rho.back();

        // Observation multiset of p over previous-level nodes.
        auto observe = [&](int p) {
            std::map<NodeId, int> obs;
            for (const auto& [edge, mult] : snap.edges) {
                auto [u, v] = edge;
                if (u == p) obs[prev_rho[static_cast<std::size_t>(v - 1)]] += mult;
                if (v == p && u != v) obs[prev_rho[static_cast<std::size_t>(u - 1)]] += mult;
            }
            return obs;
        };

        std::vector<NodeId> next_rho(static_cast<std::size_t>(trace.n), kNoNode);
        for (NodeId parent : gt.tree.level(round - 1)) {
            std::map<std::map<NodeId, int>, std::vector<int>> classes;
            for (int p = 1; p <= trace.n; ++p)
                if (prev_rho[static_cast<std::size_t>(p - 1)] == parent)
                    classes[observe(p)].push_back(p);
            for (const auto& [obs, members] : classes) {
                NodeId id = gt.tree.add_node(round, parent, gt.tree.node(parent).label);
                gt.alpha.push_back(static_cast<std::int64_t>(members.size()));
                gt.tree.set_red_up(id, {obs.begin(), obs.end()});
                for (int p : members) next_rho[static_cast<std::size_t>(p - 1)] = id;
            }
        }
        gt.rho.push_back(std::move(next_rho));
    }
    return gt;
}

}  // namespace histree

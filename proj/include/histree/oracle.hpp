#pragma once

// Brute-force reference implementations that certify the history-tree
// construction and the counting algorithms on small instances. These
// deliberately avoid the history-tree code paths: indistinguishability is
// recomputed by direct partition refinement over the trace, and a second
// route hashes full received-message trees structurally.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "histree/counting.hpp"
#include "histree/execution.hpp"
#include "histree/history_tree.hpp"
#include "histree/model.hpp"

namespace histree {

// Disjoint classes of process ids covering 1..n; classes sorted, and listed
// by smallest member.
using Partition = std::vector<std::vector<int>>;

namespace detail {

template <typename Key>
Partition partition_by(int n, const std::vector<Key>& key_of) {
    std::map<Key, std::vector<int>> classes;
    for (int p = 1; p <= n; ++p) classes[key_of[static_cast<std::size_t>(p - 1)]].push_back(p);
    Partition partition;
    for (auto& [key, members] : classes) partition.push_back(std::move(members));
    std::sort(partition.begin(), partition.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return partition;
}

}  // namespace detail

// Indistinguishability after round t, from its inductive definition: equal
// inputs at round 0; thereafter, same previous class and an equal number of
// links into every previous class.
inline Partition brute_force_partition(const DynamicNetworkTrace& trace, int t) {
    if (t < 0 || t > trace.rounds()) throw contract_error("round out of range");
    std::vector<int> cls(static_cast<std::size_t>(trace.n));
    {
        std::map<ProcessInput, int> ids;
        for (int p = 1; p <= trace.n; ++p) {
            auto [it, _] = ids.try_emplace(trace.input_of(p), static_cast<int>(ids.size()));
            cls[static_cast<std::size_t>(p - 1)] = it->second;
        }
    }
    for (int round = 1; round <= t; ++round) {
        const auto& snap = trace.snapshots[static_cast<std::size_t>(round - 1)];
        using Signature = std::pair<int, std::vector<std::pair<int, int>>>;
        std::vector<Signature> sig(static_cast<std::size_t>(trace.n));
        for (int p = 1; p <= trace.n; ++p) {
            std::map<int, int> received;  // previous class -> number of links
            for (const auto& [edge, mult] : snap.edges) {
                auto [u, v] = edge;
                if (u == p) received[cls[static_cast<std::size_t>(v - 1)]] += mult;
                if (v == p && u != v) received[cls[static_cast<std::size_t>(u - 1)]] += mult;
            }
            sig[static_cast<std::size_t>(p - 1)] = {cls[static_cast<std::size_t>(p - 1)],
                                                    {received.begin(), received.end()}};
        }
        std::map<Signature, int> ids;
        for (int p = 1; p <= trace.n; ++p) {
            auto [it, _] = ids.try_emplace(sig[static_cast<std::size_t>(p - 1)],
                                           static_cast<int>(ids.size()));
            cls[static_cast<std::size_t>(p - 1)] = it->second;
        }
    }
    return detail::partition_by(trace.n, cls);
}

// Second independent route: every process state is its full received-message
// tree, hash-consed structurally round by round; processes are grouped by
// their final state id.
inline Partition message_tree_partition(const DynamicNetworkTrace& trace, int t) {
    if (t < 0 || t > trace.rounds()) throw contract_error("round out of range");
    using TreeNode = std::pair<int, std::vector<std::pair<int, int>>>;  // (prev state, received)
    std::map<ProcessInput, int> roots;
    std::vector<int> state(static_cast<std::size_t>(trace.n));
    for (int p = 1; p <= trace.n; ++p) {
        auto [it, _] = roots.try_emplace(trace.input_of(p), static_cast<int>(roots.size()));
        state[static_cast<std::size_t>(p - 1)] = it->second;
    }
    int next_id = static_cast<int>(roots.size());
    std::map<TreeNode, int> interned;
    for (int round = 1; round <= t; ++round) {
        const auto& snap = trace.snapshots[static_cast<std::size_t>(round - 1)];
        std::vector<int> next(static_cast<std::size_t>(trace.n));
        for (int p = 1; p <= trace.n; ++p) {
            std::map<int, int> received;  // state id -> copies delivered
            for (const auto& [edge, mult] : snap.edges) {
                auto [u, v] = edge;
                if (u == p) received[state[static_cast<std::size_t>(v - 1)]] += mult;
                if (v == p && u != v) received[state[static_cast<std::size_t>(u - 1)]] += mult;
            }
            TreeNode node{state[static_cast<std::size_t>(p - 1)],
                          {received.begin(), received.end()}};
            auto [it, inserted] = interned.try_emplace(node, next_id);
            if (inserted) ++next_id;
            next[static_cast<std::size_t>(p - 1)] = it->second;
        }
        state = std::move(next);
    }
    return detail::partition_by(trace.n, state);
}

inline Partition ground_truth_partition(const GroundTruth& gt, int t) {
    int n = static_cast<int>(gt.rho.front().size());
    std::vector<NodeId> key(static_cast<std::size_t>(n));
    for (int p = 1; p <= n; ++p) key[static_cast<std::size_t>(p - 1)] = gt.node_of(p, t);
    return detail::partition_by(n, key);
}

// Checks a ground truth against its trace: every level's partition must
// match the brute-force refinement, every red multiplicity must match a
// direct recount of links between the represented process sets, and the
// structural facts (labels, adjacent-level edges, anonymity sums,
// refinement of classes) must hold.
inline bool verify_ground_truth(const GroundTruth& gt, const DynamicNetworkTrace& trace,
                                std::vector<std::string>* violations = nullptr) {
    bool ok = true;
    auto report = [&](const std::string& what) {
        ok = false;
        if (violations) violations->push_back(what);
    };

    const auto& tree = gt.tree;
    if (tree.depth() != trace.rounds()) report("tree depth differs from trace length");

    for (NodeId id = 0; id < static_cast<NodeId>(tree.nodes.size()); ++id) {
        const auto& node = tree.node(id);
        if (id == tree.root()) continue;
        if (node.parent == kNoNode || tree.node(node.parent).level != node.level - 1)
            report("node " + std::to_string(id) + ": parent is not one level up");
        if (node.level > 0 && !(node.label == tree.node(node.parent).label))
            report("node " + std::to_string(id) + ": label differs from parent");
        for (const auto& [target, mult] : node.red_up) {
            if (tree.node(target).level != node.level - 1)
                report("node " + std::to_string(id) + ": red edge skips a level");
            if (mult <= 0) report("node " + std::to_string(id) + ": red multiplicity <= 0");
        }
        std::int64_t child_sum = 0;
        for (NodeId child : node.children) child_sum += gt.alpha[static_cast<std::size_t>(child)];
        if (node.level < tree.depth() && child_sum != gt.alpha[static_cast<std::size_t>(id)])
            report("node " + std::to_string(id) + ": anonymity != sum of children");
    }
    {
        std::map<ProcessInput, int> seen;
        for (NodeId id : tree.level(0)) ++seen[tree.node(id).label];
        for (const auto& [label, count] : seen)
            if (count > 1) report("duplicate label in level 0");
    }

    for (int t = -1; t <= trace.rounds(); ++t) {
        std::map<NodeId, std::int64_t> counted;
        for (int p = 1; p <= trace.n; ++p) ++counted[gt.node_of(p, t)];
        std::int64_t level_sum = 0;
        for (NodeId id : tree.level(t)) {
            auto it = counted.find(id);
            std::int64_t represented = it == counted.end() ? 0 : it->second;
            if (represented != gt.alpha[static_cast<std::size_t>(id)])
                report("level " + std::to_string(t) + ": anonymity of node " +
                       std::to_string(id) + " differs from class size");
            level_sum += gt.alpha[static_cast<std::size_t>(id)];
        }
        if (level_sum != trace.n) report("level " + std::to_string(t) + ": anonymities sum != n");
        if (t >= 0) {
            for (int p = 1; p <= trace.n; ++p)
                if (tree.node(gt.node_of(p, t)).parent != gt.node_of(p, t - 1))
                    report("process " + std::to_string(p) + ": classes do not refine at level " +
                           std::to_string(t));
            if (ground_truth_partition(gt, t) != brute_force_partition(trace, t))
                report("level " + std::to_string(t) + ": partition differs from brute force");
        }
    }

    // Red multiplicities, recounted per process against the trace.
    for (int t = 1; t <= trace.rounds(); ++t) {
        const auto& snap = trace.snapshots[static_cast<std::size_t>(t - 1)];
        for (int p = 1; p <= trace.n; ++p) {
            std::map<NodeId, int> observed;
            for (const auto& [edge, mult] : snap.edges) {
                auto [u, v] = edge;
                if (u == p) observed[gt.node_of(v, t - 1)] += mult;
                if (v == p && u != v) observed[gt.node_of(u, t - 1)] += mult;
            }
            const auto& node = tree.node(gt.node_of(p, t));
            std::map<NodeId, int> stored(node.red_up.begin(), node.red_up.end());
            if (observed != stored)
                report("round " + std::to_string(t) + ": red edges of process " +
                       std::to_string(p) + "'s node differ from a recount");
        }
    }
    return ok;
}

enum class CountingAlgorithmKind { stabilizing, terminating };

inline std::string to_string(CountingAlgorithmKind kind) {
    return kind == CountingAlgorithmKind::stabilizing ? "stabilizing" : "terminating";
}

struct CountingRunReport {
    std::string algorithm;
    int n = 0;
    int rounds = 0;
    std::optional<int> stabilization_round;
    std::optional<int> termination_round;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["algorithm"] = algorithm;
        j["n"] = n;
        j["rounds"] = rounds;
        j["stabilization_round"] =
            stabilization_round ? nlohmann::json(*stabilization_round) : nlohmann::json();
        j["termination_round"] =
            termination_round ? nlohmann::json(*termination_round) : nlohmann::json();
        j["ok"] = ok();
        j["violations"] = violations;
        return j;
    }
};

// Runs a counting algorithm over the trace and checks every emitted
// inventory against the true one, plus the round bounds that apply:
// stabilizing outputs must be correct from round 2n-2 on; the terminating
// algorithm must never emit a wrong inventory and, if the trace is long
// enough, all processes must be terminal by round 3n-2. An optional
// family-specific bound demands the leader stay Unknown before a round.
template <LocalAlgorithm A>
CountingRunReport verify_counting_run(const DynamicNetworkTrace& trace, const A& algorithm,
                                      CountingAlgorithmKind kind,
                                      std::optional<int> leader_unknown_before = std::nullopt) {
    CountingRunReport rep;
    rep.algorithm = to_string(kind);
    rep.n = trace.n;
    rep.rounds = trace.rounds();
    const Inventory truth = inventory(trace);

    ExecutionResult<CountingOutput> result = run_execution(trace, algorithm);
    rep.stabilization_round = result.stabilization_round;
    rep.termination_round = result.termination_round;

    auto complain = [&](int round, int process, const std::string& what) {
        rep.violations.push_back("round " + std::to_string(round) + ", process " +
                                 std::to_string(process) + ": " + what);
    };

    for (int round = 0; round <= trace.rounds(); ++round) {
        for (int p = 1; p <= trace.n; ++p) {
            const auto& out = result.output_at(round, p);
            if (kind == CountingAlgorithmKind::terminating) {
                if (!out.unknown() && *out.inventory != truth)
                    complain(round, p, "terminating output is a wrong inventory");
            } else {
                if (round >= 2 * trace.n - 2 && (out.unknown() || *out.inventory != truth))
                    complain(round, p, "stabilizing output wrong at round >= 2n-2");
            }
            if (leader_unknown_before && trace.input_of(p).leader &&
                round < *leader_unknown_before && !out.unknown())
                complain(round, p, "leader decided before the family's lower bound");
        }
    }
    if (kind == CountingAlgorithmKind::terminating && trace.rounds() >= 3 * trace.n - 2) {
        if (!rep.termination_round || *rep.termination_round > 3 * trace.n - 2)
            rep.violations.push_back("system not terminated by round 3n-2");
    }
    return rep;
}

inline CountingRunReport verify_counting_run(const DynamicNetworkTrace& trace,
                                             CountingAlgorithmKind kind,
                                             std::optional<int> leader_unknown_before =
                                                 std::nullopt) {
    return kind == CountingAlgorithmKind::stabilizing
               ? verify_counting_run(trace, StabilizingCounting{}, kind, leader_unknown_before)
               : verify_counting_run(trace, TerminatingCounting{}, kind, leader_unknown_before);
}

}  // namespace histree

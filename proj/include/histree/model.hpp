#pragma once

// Core model of anonymous round-synchronous dynamic networks: process
// inputs with a unique leader flag, connected multigraph snapshots
// (parallel links and self-loops allowed), finite traces, and the
// inventory multiset that generalized counting has to reconstruct.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace histree {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed inputs: snapshots, traces, files.
struct validation_error : error {
    using error::error;
};

// A peer handed us something the round protocol forbids (e.g. a history
// of the wrong depth).
struct protocol_error : error {
    using error::error;
};

// Bad user-supplied parameters (generators, CLI, experiment grids).
struct config_error : error {
    using error::error;
};

// An internal precondition of an operation was violated by the caller.
struct contract_error : error {
    using error::error;
};

struct ProcessInput {
    bool leader = false;
    std::string value;

    friend auto operator<=>(const ProcessInput&, const ProcessInput&) = default;
};

// Multiset of inputs held by the processes; the answer to generalized
// counting. Keys with multiplicity zero are never stored.
using Inventory = std::map<ProcessInput, std::int64_t>;

inline std::int64_t inventory_total(const Inventory& inv) {
    std::int64_t total = 0;
    for (const auto& [input, count] : inv) total += count;
    return total;
}

// One communication round: an undirected multigraph on processes 1..n.
// Edges are normalized with u <= v; self-loops are {u,u}.
struct MultigraphSnapshot {
    int n = 0;
    std::map<std::pair<int, int>, int> edges;  // (u,v) with u <= v -> multiplicity >= 1

    void add_edge(int u, int v, int multiplicity = 1) {
        if (multiplicity <= 0) throw validation_error("edge multiplicity must be positive");
        if (u > v) std::swap(u, v);
        edges[{u, v}] += multiplicity;
    }

    int multiplicity(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = edges.find({u, v});
        return it == edges.end() ? 0 : it->second;
    }
};

// True iff the simple graph obtained by dropping multiplicities and
// self-loops is connected on all n vertices. A single vertex with no
// edges counts as connected. Out-of-range endpoints are malformed.
inline bool validate_connectivity(const MultigraphSnapshot& s) {
    if (s.n <= 0) throw validation_error("snapshot has non-positive process count");
    for (const auto& [edge, mult] : s.edges) {
        auto [u, v] = edge;
        if (u < 1 || u > s.n || v < 1 || v > s.n)
            throw validation_error("snapshot edge endpoint out of range 1..n");
        if (mult <= 0) throw validation_error("snapshot edge has non-positive multiplicity");
    }
    if (s.n == 1) return true;

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(s.n) + 1);
    for (const auto& [edge, mult] : s.edges) {
        auto [u, v] = edge;
        if (u == v) continue;  // self-loops do not help connectivity
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    std::vector<char> seen(static_cast<std::size_t>(s.n) + 1, 0);
    std::vector<int> stack{1};
    seen[1] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++reached;
                stack.push_back(v);
            }
        }
    }
    return reached == s.n;
}

// A size-n system, an input per process (1-based: inputs[p-1]), and one
// connected snapshot per round 1..T.
struct DynamicNetworkTrace {
    int n = 0;
    std::vector<ProcessInput> inputs;
    std::vector<MultigraphSnapshot> snapshots;

    int rounds() const { return static_cast<int>(snapshots.size()); }
    const ProcessInput& input_of(int process) const {
        return inputs[static_cast<std::size_t>(process - 1)];
    }
};

inline void validate_trace(const DynamicNetworkTrace& trace) {
    if (trace.n <= 0) throw validation_error("trace has non-positive process count");
    if (static_cast<int>(trace.inputs.size()) != trace.n)
        throw validation_error("trace input assignment does not cover all processes");
    int leaders = 0;
    for (const auto& input : trace.inputs) leaders += input.leader ? 1 : 0;
    if (leaders != 1)
        throw validation_error("trace must have exactly one leader, found " +
                               std::to_string(leaders));
    for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
        const auto& snap = trace.snapshots[i];
        if (snap.n != trace.n)
            throw validation_error("snapshot " + std::to_string(i + 1) +
                                   " has mismatched process count");
        if (!validate_connectivity(snap))
            throw validation_error("snapshot " + std::to_string(i + 1) + " is not connected");
    }
}

inline int leader_process(const DynamicNetworkTrace& trace) {
    for (int p = 1; p <= trace.n; ++p)
        if (trace.input_of(p).leader) return p;
    throw validation_error("trace has no leader");
}

inline Inventory inventory(const std::vector<ProcessInput>& assignment) {
    Inventory inv;
    for (const auto& input : assignment) ++inv[input];
    return inv;
}

inline Inventory inventory(const DynamicNetworkTrace& trace) { return inventory(trace.inputs); }

// Wraps a counting answer into a solver for an arbitrary multi-aggregation
// problem: each process applies the signature function to its own input and
// the full inventory, at zero extra rounds.
template <typename Signature>
auto multi_aggregate(const ProcessInput& input, const Inventory& inv, Signature&& signature) {
    return std::forward<Signature>(signature)(input, inv);
}

}  // namespace histree

#pragma once

// Network families used by tests and experiments:
//
//  - lower_bound_gn: the path-with-moving-chord family on which no algorithm
//    can distinguish n from n+1 before round 2n-4 (leaders of consecutive
//    sizes see identical histories through round 2n-5);
//  - cycle_to_path: a cycle that snaps into a path at round m, hiding the
//    system size from the leader through round 3m-2 (sizes 2m vs 2m+1);
//  - static_complete: the complete graph every round, on which nothing ever
//    branches below the first level;
//  - random_connected: seeded random connected multigraphs, optionally with
//    parallel links and self-loops.
//
// Plus a randomized search for traces on which the stabilizing algorithm
// reports a wrong total before its guarantee kicks in.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "histree/counting.hpp"
#include "histree/history_tree.hpp"
#include "histree/model.hpp"
#include "histree/view.hpp"

namespace histree {

struct InputScheme {
    std::string leader_value = "x";
    // Assigned to processes 2..n round-robin.
    std::vector<std::string> follower_values = {"x"};
};

inline std::vector<ProcessInput> make_inputs(int n, const InputScheme& scheme = {}) {
    if (n < 1) throw config_error("need at least one process");
    if (scheme.follower_values.empty() && n > 1)
        throw config_error("input scheme has no follower values");
    std::vector<ProcessInput> inputs;
    inputs.push_back({true, scheme.leader_value});
    for (int p = 2; p <= n; ++p)
        inputs.push_back({false, scheme.follower_values[static_cast<std::size_t>(p - 2) %
                                                        scheme.follower_values.size()]});
    return inputs;
}

namespace detail {

// mt19937_64 with rejection sampling, so streams are identical across
// platforms (the standard distributions are not).
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw contract_error("Rng::below(0)");
        const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
        std::uint64_t value;
        do {
            value = gen();
        } while (value >= limit);
        return value % bound;
    }
    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
};

inline MultigraphSnapshot path_snapshot(int n) {
    MultigraphSnapshot snap;
    snap.n = n;
    for (int j = 1; j < n; ++j) snap.add_edge(j, j + 1);
    return snap;
}

}  // namespace detail

// Round t <= n-3: the path 1-2-..-n plus the chord {t+1, n}; afterwards the
// plain path. Leader at process 1.
inline DynamicNetworkTrace gen_lower_bound_gn(int n, int rounds,
                                              const InputScheme& scheme = {}) {
    if (n < 4) throw config_error("lower-bound family needs n >= 4");
    DynamicNetworkTrace trace;
    trace.n = n;
    trace.inputs = make_inputs(n, scheme);
    for (int t = 1; t <= rounds; ++t) {
        auto snap = detail::path_snapshot(n);
        if (t <= n - 3) snap.add_edge(t + 1, n);
        trace.snapshots.push_back(std::move(snap));
    }
    validate_trace(trace);
    return trace;
}

// Rounds 1..m-1: the cycle 1-2-..-n-1. From round m on: the edges {m, m+1}
// and {1, n} are gone and {m, n} appears, giving the path with endpoints 1
// and m+1. Leader at process 1.
inline DynamicNetworkTrace gen_cycle_to_path(int n, int m, int rounds,
                                             const InputScheme& scheme = {}) {
    if (n < 2) throw config_error("cycle-to-path family needs n >= 2");
    if (m < 1 || m >= n) throw config_error("cycle-to-path family needs 1 <= m < n");
    DynamicNetworkTrace trace;
    trace.n = n;
    trace.inputs = make_inputs(n, scheme);
    for (int t = 1; t <= rounds; ++t) {
        MultigraphSnapshot snap;
        snap.n = n;
        if (t < m) {
            for (int j = 1; j < n; ++j) snap.add_edge(j, j + 1);
            snap.add_edge(1, n);
        } else {
            for (int j = 1; j < n; ++j)
                if (j != m) snap.add_edge(j, j + 1);
            snap.add_edge(m, n);
        }
        trace.snapshots.push_back(std::move(snap));
    }
    validate_trace(trace);
    return trace;
}

inline DynamicNetworkTrace gen_static_complete(int n, int rounds,
                                               const InputScheme& scheme = {}) {
    if (n < 1) throw config_error("complete family needs n >= 1");
    DynamicNetworkTrace trace;
    trace.n = n;
    trace.inputs = make_inputs(n, scheme);
    for (int t = 1; t <= rounds; ++t) {
        MultigraphSnapshot snap;
        snap.n = n;
        for (int u = 1; u <= n; ++u)
            for (int v = u + 1; v <= n; ++v) snap.add_edge(u, v);
        trace.snapshots.push_back(std::move(snap));
    }
    validate_trace(trace);
    return trace;
}

// Per round: a random spanning tree plus up to extra_edge_budget extra
// edges; with probability loop_and_parallel_prob the round also gets a
// self-loop and a doubled link. Deterministic given the seed.
inline DynamicNetworkTrace gen_random_connected(int n, int rounds, int extra_edge_budget,
                                                double loop_and_parallel_prob,
                                                std::uint64_t seed,
                                                const InputScheme& scheme = {}) {
    if (n < 1) throw config_error("random family needs n >= 1");
    if (extra_edge_budget < 0) throw config_error("extra edge budget must be >= 0");
    detail::Rng rng(seed);
    DynamicNetworkTrace trace;
    trace.n = n;
    trace.inputs = make_inputs(n, scheme);
    for (int t = 1; t <= rounds; ++t) {
        MultigraphSnapshot snap;
        snap.n = n;
        std::vector<int> order(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
        for (int i = n - 1; i > 0; --i)
            std::swap(order[static_cast<std::size_t>(i)],
                      order[rng.below(static_cast<std::uint64_t>(i + 1))]);
        for (int i = 1; i < n; ++i)
            snap.add_edge(order[static_cast<std::size_t>(i)],
                          order[rng.below(static_cast<std::uint64_t>(i))]);
        if (n >= 2 && extra_edge_budget > 0) {
            int extras = rng.range(0, extra_edge_budget);
            for (int k = 0; k < extras; ++k) {
                int u = rng.range(1, n);
                int v = rng.range(1, n - 1);
                if (v >= u) ++v;
                snap.add_edge(u, v);
            }
        }
        if (loop_and_parallel_prob > 0 && rng.unit() < loop_and_parallel_prob) {
            snap.add_edge(rng.range(1, n), rng.range(1, n));  // may be a loop or a parallel link
            int u = rng.range(1, n);
            snap.add_edge(u, u);
        }
        trace.snapshots.push_back(std::move(snap));
    }
    validate_trace(trace);
    return trace;
}

enum class Family { lower_bound_gn, cycle_to_path, static_complete, random_connected };

inline std::string family_name(Family family) {
    switch (family) {
        case Family::lower_bound_gn: return "gn";
        case Family::cycle_to_path: return "cycle-to-path";
        case Family::static_complete: return "complete";
        case Family::random_connected: return "random";
    }
    return "?";
}

struct GeneratorSpec {
    Family family = Family::random_connected;
    int n = 4;
    int m = 1;        // cycle_to_path only
    int rounds = 10;
    int extra_edge_budget = 2;          // random only
    double loop_and_parallel_prob = 0;  // random only
    std::uint64_t seed = 1;
    InputScheme scheme;
};

inline DynamicNetworkTrace generate_trace(const GeneratorSpec& spec) {
    if (spec.rounds < 0) throw config_error("round count must be >= 0");
    switch (spec.family) {
        case Family::lower_bound_gn:
            return gen_lower_bound_gn(spec.n, spec.rounds, spec.scheme);
        case Family::cycle_to_path:
            return gen_cycle_to_path(spec.n, spec.m, spec.rounds, spec.scheme);
        case Family::static_complete:
            return gen_static_complete(spec.n, spec.rounds, spec.scheme);
        case Family::random_connected:
            return gen_random_connected(spec.n, spec.rounds, spec.extra_edge_budget,
                                        spec.loop_and_parallel_prob, spec.seed, spec.scheme);
    }
    throw config_error("unknown family");
}

struct NaiveFailureWitness {
    DynamicNetworkTrace trace;
    int round = 0;    // strictly before 2n-2
    int process = 0;  // a process whose stabilizing output has the wrong total
    Inventory reported;
};

// Randomized search for a trace and round where the stabilizing algorithm
// returns an inventory whose total differs from n. Only rounds before the
// 2n-2 guarantee are eligible. Returns the first witness found within the
// seed budget.
inline std::optional<NaiveFailureWitness> search_naive_failure(std::uint64_t base_seed,
                                                               int n_lo, int n_hi,
                                                               int seed_budget) {
    if (n_lo < 2 || n_hi < n_lo) throw config_error("need 2 <= n_lo <= n_hi");
    for (int attempt = 0; attempt < seed_budget; ++attempt) {
        const int n = n_lo + attempt % (n_hi - n_lo + 1);
        const int rounds = 2 * n;
        const int extra = attempt % 3;
        const double loop_prob = (attempt % 4 == 3) ? 0.3 : 0.0;
        auto trace = gen_random_connected(n, rounds, extra, loop_prob,
                                          base_seed + static_cast<std::uint64_t>(attempt));
        auto gt = build_ground_truth(trace);
        const int last_eligible = std::min(rounds, 2 * n - 3);
        for (int r = 1; r <= last_eligible; ++r) {
            for (NodeId h : gt.tree.level(r)) {
                auto out = stabilizing_count(view_of(gt, h));
                if (out.unknown() || inventory_total(*out.inventory) == n) continue;
                NaiveFailureWitness witness;
                witness.round = r;
                witness.reported = *out.inventory;
                for (int p = 1; p <= n; ++p)
                    if (gt.node_of(p, r) == h) {
                        witness.process = p;
                        break;
                    }
                witness.trace = std::move(trace);
                return witness;
            }
        }
    }
    return std::nullopt;
}

}  // namespace histree

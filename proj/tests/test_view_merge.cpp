#include <catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "histree/generators.hpp"
#include "histree/history_tree.hpp"
#include "histree/model.hpp"
#include "histree/view.hpp"

using namespace histree;

namespace {

DynamicNetworkTrace make_trace(int n, std::vector<ProcessInput> inputs,
                               std::vector<std::vector<std::array<int, 3>>> rounds) {
    DynamicNetworkTrace trace;
    trace.n = n;
    trace.inputs = std::move(inputs);
    for (const auto& round : rounds) {
        MultigraphSnapshot snap;
        snap.n = n;
        for (const auto& e : round) snap.add_edge(e[0], e[1], e[2]);
        trace.snapshots.push_back(std::move(snap));
    }
    validate_trace(trace);
    return trace;
}

// Runs the local update for every process along the whole trace, returning
// the per-round views.
std::vector<std::vector<View>> simulate_views(const DynamicNetworkTrace& trace) {
    std::vector<std::vector<View>> per_round;
    std::vector<View> current;
    for (int p = 1; p <= trace.n; ++p) current.push_back(initial_view(trace.input_of(p)));
    per_round.push_back(current);
    for (int round = 1; round <= trace.rounds(); ++round) {
        const auto& snap = trace.snapshots[static_cast<std::size_t>(round - 1)];
        std::vector<std::vector<std::pair<const View*, int>>> received(
            static_cast<std::size_t>(trace.n));
        for (const auto& [edge, mult] : snap.edges) {
            auto [u, v] = edge;
            received[static_cast<std::size_t>(u - 1)].emplace_back(
                &current[static_cast<std::size_t>(v - 1)], mult);
            if (u != v)
                received[static_cast<std::size_t>(v - 1)].emplace_back(
                    &current[static_cast<std::size_t>(u - 1)], mult);
        }
        std::vector<View> next;
        for (int p = 1; p <= trace.n; ++p)
            next.push_back(extend_and_merge(current[static_cast<std::size_t>(p - 1)],
                                            received[static_cast<std::size_t>(p - 1)]));
        per_round.push_back(next);
        current = std::move(next);
    }
    return per_round;
}

}  // namespace

TEST_CASE("view of the root is the bare root") {
    auto gt = build_ground_truth(make_trace(2, make_inputs(2), {{{1, 2, 1}}}));
    View v = view_of(gt, gt.tree.root());
    CHECK(v.depth() == -1);
    CHECK(v.tree.nodes.size() == 1);
    CHECK(v.viewpoint == v.tree.root());
}

TEST_CASE("views are closed under parents and observation edges") {
    auto trace = gen_random_connected(7, 8, 2, 0.25, 99);
    auto gt = build_ground_truth(trace);
    for (int t = 0; t <= gt.tree.depth(); ++t) {
        for (NodeId h : gt.tree.level(t)) {
            View v = view_of(gt, h);
            int deepest = 0;
            for (NodeId id = 0; id < static_cast<NodeId>(v.tree.nodes.size()); ++id) {
                const auto& node = v.tree.node(id);
                if (node.level == v.depth()) ++deepest;
                if (id != v.tree.root()) {
                    CHECK(node.parent != kNoNode);
                    CHECK(v.tree.node(node.parent).level == node.level - 1);
                }
                for (const auto& [target, mult] : node.red_up)
                    CHECK(v.tree.node(target).level == node.level - 1);
            }
            CHECK(deepest == 1);  // the viewpoint is the unique deepest node
            CHECK(v.tree.node(v.viewpoint).level == t);
        }
    }
}

TEST_CASE("canonical form ignores construction order") {
    auto build = [](bool leader_first) {
        View v;
        v.tree.add_root();
        NodeId l, n;
        if (leader_first) {
            l = v.tree.add_node(0, v.tree.root(), {true, "x"});
            n = v.tree.add_node(0, v.tree.root(), {false, "x"});
        } else {
            n = v.tree.add_node(0, v.tree.root(), {false, "x"});
            l = v.tree.add_node(0, v.tree.root(), {true, "x"});
        }
        NodeId child = v.tree.add_node(1, l, {true, "x"});
        v.tree.set_red_up(child, {{n, 2}});
        v.viewpoint = child;
        return v;
    };
    CHECK(canonical_form(build(true)) == canonical_form(build(false)));
    CHECK(views_isomorphic(build(true), build(false)));
}

TEST_CASE("single-node views with different labels differ") {
    View a = initial_view({false, "a"});
    View b = initial_view({false, "b"});
    View l = initial_view({true, "a"});
    CHECK(canonical_form(a) != canonical_form(b));
    CHECK(canonical_form(a) != canonical_form(l));
    CHECK(views_isomorphic(a, a));
}

TEST_CASE("views of different depth are never isomorphic") {
    View a = initial_view({true, "x"});
    View deeper = extend_and_merge(a, {});
    CHECK(views_isomorphic(a, a));
    CHECK_FALSE(views_isomorphic(a, deeper));
}

TEST_CASE("merging nothing extends the viewpoint chain only") {
    View a = initial_view({true, "x"});
    View b = extend_and_merge(a, {});
    CHECK(b.depth() == 1);
    CHECK(b.tree.nodes.size() == 3);
    CHECK(b.tree.node(b.viewpoint).red_up.empty());
    CHECK(b.tree.node(b.viewpoint).parent == a.viewpoint);
}

TEST_CASE("merging m copies of one's own view adds a single red edge of multiplicity m") {
    View a = initial_view({false, "x"});
    View same = initial_view({false, "x"});
    View merged = extend_and_merge(a, {{&same, 3}});
    REQUIRE(merged.tree.node(merged.viewpoint).red_up.size() == 1);
    auto [target, mult] = merged.tree.node(merged.viewpoint).red_up.front();
    CHECK(mult == 3);
    CHECK(target == a.viewpoint);
    // No duplicate of the own chain was created.
    CHECK(merged.tree.level(0).size() == 1);
}

TEST_CASE("merging a history of the wrong depth is a protocol error") {
    View a = initial_view({true, "x"});
    View deeper = extend_and_merge(a, {});
    CHECK_THROWS_AS(extend_and_merge(deeper, {{&a, 1}}), protocol_error);
}

TEST_CASE("sibling classes that differ only outside the received view stay distinct") {
    // Processes 1 and 2 split at round 2 because only process 2 hears from
    // process 3. Process 1's round-3 history does not contain process 3's
    // level-1 class at all, so when process 2 merges it at round 4 the
    // matcher sees process 1's class agreeing with process 2's own class on
    // every edge visible in the incoming view; only the full edge sets keep
    // them apart.
    auto trace = make_trace(4,
                            {{false, "x"}, {false, "x"}, {false, "x"}, {true, "x"}},
                            {{{1, 4, 1}, {2, 4, 1}, {3, 1, 1}, {3, 2, 1}},
                             {{1, 4, 1}, {2, 4, 1}, {2, 3, 1}},
                             {{1, 4, 1}, {4, 3, 1}, {3, 2, 1}},
                             {{1, 2, 1}, {2, 3, 1}, {3, 4, 1}}});
    auto gt = build_ground_truth(trace);

    // Ground truth: the shared level-1 class of processes 1 and 2 has two
    // children, and both appear in process 2's view at round 4.
    NodeId shared = gt.node_of(1, 1);
    REQUIRE(shared == gt.node_of(2, 1));
    REQUIRE(gt.tree.node(shared).children.size() == 2);

    std::vector<NodeId> sources;
    View truth_view = view_of(gt, gt.node_of(2, 4), &sources);
    std::set<NodeId> present(sources.begin(), sources.end());
    CHECK(present.count(gt.node_of(1, 2)) == 1);
    CHECK(present.count(gt.node_of(2, 2)) == 1);

    // And the locally merged history agrees with the ground-truth view.
    auto views = simulate_views(trace);
    CHECK(canonical_form(views[4][1]) == canonical_form(truth_view));
}

TEST_CASE("local merging reproduces ground-truth views on every process and round") {
    std::vector<DynamicNetworkTrace> traces;
    traces.push_back(gen_lower_bound_gn(6, 10));
    traces.push_back(gen_cycle_to_path(8, 4, 10));
    traces.push_back(gen_static_complete(5, 8));
    for (int s = 0; s < 30; ++s) {
        const int n = 2 + s % 7;
        traces.push_back(gen_random_connected(n, 12, s % 3, s % 4 == 1 ? 0.3 : 0.0,
                                              static_cast<std::uint64_t>(500 + s)));
    }
    for (const auto& trace : traces) {
        auto gt = build_ground_truth(trace);
        auto views = simulate_views(trace);
        for (int round = 0; round <= trace.rounds(); ++round) {
            for (int p = 1; p <= trace.n; ++p) {
                const View truth = view_of(gt, gt.node_of(p, round));
                const View& local = views[static_cast<std::size_t>(round)]
                                         [static_cast<std::size_t>(p - 1)];
                REQUIRE(canonical_form(local) == canonical_form(truth));
            }
        }
    }
}

TEST_CASE("every node reaches every view after n-1 more rounds") {
    for (auto trace : {gen_random_connected(5, 10, 1, 0.0, 21),
                       gen_random_connected(6, 11, 2, 0.2, 22),
                       gen_lower_bound_gn(6, 11)}) {
        auto gt = build_ground_truth(trace);
        for (int t = 0; t + trace.n - 1 <= gt.tree.depth(); ++t) {
            const int later = t + trace.n - 1;
            std::set<NodeId> level_nodes(gt.tree.level(t).begin(), gt.tree.level(t).end());
            for (NodeId w : gt.tree.level(later)) {
                std::vector<NodeId> sources;
                view_of(gt, w, &sources);
                std::set<NodeId> present(sources.begin(), sources.end());
                for (NodeId v : level_nodes) CHECK(present.count(v) == 1);
            }
        }
    }
}

TEST_CASE("merging is insensitive to the order of received views") {
    auto trace = gen_random_connected(6, 6, 2, 0.3, 77);
    auto gt = build_ground_truth(trace);
    const int round = 5;
    // Rebuild process 1's history at `round` with received views reversed.
    auto views = simulate_views(trace);
    const auto& snap = trace.snapshots[round - 1];
    std::vector<std::pair<const View*, int>> received;
    for (const auto& [edge, mult] : snap.edges) {
        auto [u, v] = edge;
        if (u == 1) received.emplace_back(&views[round - 1][static_cast<std::size_t>(v - 1)], mult);
        else if (v == 1)
            received.emplace_back(&views[round - 1][static_cast<std::size_t>(u - 1)], mult);
    }
    View forward = extend_and_merge(views[round - 1][0], received);
    std::reverse(received.begin(), received.end());
    View backward = extend_and_merge(views[round - 1][0], received);
    CHECK(canonical_form(forward) == canonical_form(backward));
    CHECK(canonical_form(forward) ==
          canonical_form(view_of(gt, gt.node_of(1, round))));
}

#include <catch_amalgamated.hpp>

#include <set>

#include "histree/generators.hpp"
#include "histree/history_tree.hpp"
#include "histree/model.hpp"

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

}  // namespace

TEST_CASE("two processes on a static link: two singleton classes per level") {
    auto trace = make_trace(2, {{true, "x"}, {false, "x"}},
                            {{{1, 2, 1}}, {{1, 2, 1}}, {{1, 2, 1}}});
    auto gt = build_ground_truth(trace);

    REQUIRE(gt.tree.depth() == 3);
    CHECK(gt.tree.level(-1).size() == 1);
    for (int t = 0; t <= 3; ++t) {
        REQUIRE(gt.tree.level(t).size() == 2);
        for (NodeId id : gt.tree.level(t)) CHECK(gt.alpha[static_cast<std::size_t>(id)] == 1);
    }

    // At round 1 each class observed exactly the other's level-0 node once.
    NodeId leader0 = gt.node_of(1, 0);
    NodeId other0 = gt.node_of(2, 0);
    NodeId leader1 = gt.node_of(1, 1);
    NodeId other1 = gt.node_of(2, 1);
    CHECK(gt.tree.node(leader1).red_multiplicity(other0) == 1);
    CHECK(gt.tree.node(leader1).red_multiplicity(leader0) == 0);
    CHECK(gt.tree.node(other1).red_multiplicity(leader0) == 1);
    CHECK(gt.tree.node(other1).red_multiplicity(other0) == 0);
}

TEST_CASE("a class of four splitting three against one") {
    // Round 1 is a star around the leader, leaving processes 2..5 in one
    // class; round 2 gives process 2 a different observation than 3,4,5.
    auto trace = make_trace(
        5, make_inputs(5),
        {{{1, 2, 1}, {1, 3, 1}, {1, 4, 1}, {1, 5, 1}},
         {{1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}, {5, 2, 1}}});
    auto gt = build_ground_truth(trace);

    NodeId blob = gt.node_of(2, 1);
    REQUIRE(gt.alpha[static_cast<std::size_t>(blob)] == 4);
    REQUIRE(gt.node_of(3, 1) == blob);

    const auto& children = gt.tree.node(blob).children;
    REQUIRE(children.size() == 2);
    std::multiset<std::int64_t> child_alpha;
    for (NodeId c : children) child_alpha.insert(gt.alpha[static_cast<std::size_t>(c)]);
    CHECK(child_alpha == std::multiset<std::int64_t>{1, 3});
}

TEST_CASE("anonymities sum to n per level and to the parent per node") {
    auto trace = gen_random_connected(7, 9, 2, 0.3, 42);
    auto gt = build_ground_truth(trace);
    for (int t = -1; t <= gt.tree.depth(); ++t) {
        std::int64_t sum = 0;
        for (NodeId id : gt.tree.level(t)) sum += gt.alpha[static_cast<std::size_t>(id)];
        CHECK(sum == trace.n);
    }
    for (NodeId id = 0; id < static_cast<NodeId>(gt.tree.nodes.size()); ++id) {
        const auto& node = gt.tree.node(id);
        if (node.level == gt.tree.depth()) continue;
        std::int64_t child_sum = 0;
        for (NodeId c : node.children) child_sum += gt.alpha[static_cast<std::size_t>(c)];
        CHECK(child_sum == gt.alpha[static_cast<std::size_t>(id)]);
    }
}

TEST_CASE("classes refine round over round") {
    auto trace = gen_random_connected(6, 8, 1, 0.2, 7);
    auto gt = build_ground_truth(trace);
    for (int t = 0; t <= gt.tree.depth(); ++t)
        for (int p = 1; p <= trace.n; ++p)
            CHECK(gt.tree.node(gt.node_of(p, t)).parent == gt.node_of(p, t - 1));
}

TEST_CASE("on the static complete graph nothing branches below level 0") {
    InputScheme scheme;
    scheme.follower_values = {"a", "b"};
    auto trace = gen_static_complete(6, 8, scheme);
    auto gt = build_ground_truth(trace);
    for (NodeId id = 1; id < static_cast<NodeId>(gt.tree.nodes.size()); ++id) {
        const auto& node = gt.tree.node(id);
        if (node.level < gt.tree.depth()) CHECK(node.children.size() == 1);
    }
    CHECK(gt.tree.level(0).size() == 3);
}

TEST_CASE("level zero partitions by input with matching labels") {
    InputScheme scheme;
    scheme.follower_values = {"a", "b", "a"};
    auto trace = gen_random_connected(7, 3, 1, 0.0, 11, scheme);
    auto gt = build_ground_truth(trace);
    REQUIRE(gt.tree.level(0).size() == 3);  // leader, a, b
    std::int64_t total = 0;
    for (NodeId id : gt.tree.level(0)) {
        for (int p = 1; p <= trace.n; ++p)
            if (gt.node_of(p, 0) == id) CHECK(trace.input_of(p) == gt.tree.node(id).label);
        total += gt.alpha[static_cast<std::size_t>(id)];
    }
    CHECK(total == 7);
}

TEST_CASE("self-loops count as observations of the process's own class") {
    // One process with a double self-loop, its peer without; they split at
    // round 1 even though both also see each other.
    auto trace = make_trace(3, make_inputs(3),
                            {{{1, 2, 1}, {2, 3, 1}, {2, 2, 2}}});
    auto gt = build_ground_truth(trace);
    CHECK(gt.node_of(2, 1) != gt.node_of(3, 1));
    NodeId two = gt.node_of(2, 1);
    // Process 2 saw: leader once, itself (own class) twice via the loop,
    // process 3 once -> three observations of its own level-0 class.
    CHECK(gt.tree.node(two).red_multiplicity(gt.node_of(2, 0)) == 3);
}

TEST_CASE("parallel links multiply observation counts") {
    auto trace = make_trace(2, make_inputs(2), {{{1, 2, 3}}});
    auto gt = build_ground_truth(trace);
    NodeId leader1 = gt.node_of(1, 1);
    CHECK(gt.tree.node(leader1).red_multiplicity(gt.node_of(2, 0)) == 3);
}

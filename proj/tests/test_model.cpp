#include <catch_amalgamated.hpp>

#include "histree/model.hpp"

using namespace histree;

namespace {

MultigraphSnapshot snapshot(int n, std::initializer_list<std::array<int, 3>> edges) {
    MultigraphSnapshot s;
    s.n = n;
    for (const auto& e : edges) s.add_edge(e[0], e[1], e[2]);
    return s;
}

}  // namespace

TEST_CASE("connectivity of simple snapshots") {
    CHECK(validate_connectivity(snapshot(3, {{1, 2, 1}, {2, 3, 1}})));       // path
    CHECK_FALSE(validate_connectivity(snapshot(3, {{1, 2, 1}})));            // vertex 3 isolated
    CHECK(validate_connectivity(snapshot(1, {})));                           // single vertex
}

TEST_CASE("self-loops and multiplicities do not create connectivity") {
    // A loop on the isolated vertex does not connect it.
    CHECK_FALSE(validate_connectivity(snapshot(3, {{1, 2, 5}, {3, 3, 2}})));
    // Parallel links are fine.
    CHECK(validate_connectivity(snapshot(2, {{1, 2, 4}})));
}

TEST_CASE("malformed snapshots are rejected") {
    CHECK_THROWS_AS(validate_connectivity(snapshot(3, {{1, 4, 1}})), validation_error);
    CHECK_THROWS_AS(validate_connectivity(snapshot(0, {})), validation_error);
    MultigraphSnapshot s;
    s.n = 2;
    CHECK_THROWS_AS(s.add_edge(1, 2, 0), validation_error);
}

TEST_CASE("inventory counts processes per input") {
    std::vector<ProcessInput> assignment{{true, "x"}, {false, "x"}, {false, "x"}};
    Inventory inv = inventory(assignment);
    REQUIRE(inv.size() == 2);
    CHECK(inv[{true, "x"}] == 1);
    CHECK(inv[{false, "x"}] == 2);
    CHECK(inventory_total(inv) == 3);

    CHECK(inventory({{true, "x"}}) == Inventory{{{true, "x"}, 1}});
}

TEST_CASE("inventory of a 12-process three-input assignment") {
    std::vector<ProcessInput> assignment;
    assignment.push_back({true, "L"});
    for (int i = 0; i < 6; ++i) assignment.push_back({false, "A"});
    for (int i = 0; i < 5; ++i) assignment.push_back({false, "B"});
    Inventory inv = inventory(assignment);
    CHECK(inv.size() == 3);
    CHECK(inventory_total(inv) == 12);
}

TEST_CASE("multi-aggregation wraps an inventory into any signature function") {
    std::vector<ProcessInput> assignment;
    assignment.push_back({true, "L"});
    for (int i = 0; i < 6; ++i) assignment.push_back({false, "A"});
    for (int i = 0; i < 5; ++i) assignment.push_back({false, "B"});
    Inventory inv = inventory(assignment);

    auto total = multi_aggregate(assignment[0], inv, [](const ProcessInput&, const Inventory& m) {
        return inventory_total(m);
    });
    CHECK(total == 12);

    auto identity = multi_aggregate(
        assignment[0], inv, [](const ProcessInput&, const Inventory& m) { return m; });
    CHECK(identity == inv);

    Inventory weighted{{{false, "2"}, 3}, {{true, "5"}, 1}};
    auto weighted_sum =
        multi_aggregate(ProcessInput{false, "2"}, weighted,
                        [](const ProcessInput&, const Inventory& m) {
                            std::int64_t sum = 0;
                            for (const auto& [input, count] : m)
                                sum += std::stoll(input.value) * count;
                            return sum;
                        });
    CHECK(weighted_sum == 11);
}

TEST_CASE("trace validation enforces the unique leader and connectivity") {
    DynamicNetworkTrace trace;
    trace.n = 2;
    trace.inputs = {{true, "x"}, {false, "x"}};
    trace.snapshots = {snapshot(2, {{1, 2, 1}})};
    CHECK_NOTHROW(validate_trace(trace));
    CHECK(leader_process(trace) == 1);

    auto no_leader = trace;
    no_leader.inputs[0].leader = false;
    CHECK_THROWS_AS(validate_trace(no_leader), validation_error);

    auto two_leaders = trace;
    two_leaders.inputs[1].leader = true;
    CHECK_THROWS_AS(validate_trace(two_leaders), validation_error);

    auto disconnected = trace;
    disconnected.snapshots[0].edges.clear();
    CHECK_THROWS_AS(validate_trace(disconnected), validation_error);

    auto wrong_n = trace;
    wrong_n.snapshots[0].n = 3;
    CHECK_THROWS_AS(validate_trace(wrong_n), validation_error);
}

#pragma once

// Deterministic trace corpora shared by the verification CLI and the
// acceptance suite: a small one for brute-force oracle equivalence and a
// wider one for the counting round bounds.

#include <string>
#include <vector>

#include "histree/generators.hpp"
#include "histree/model.hpp"

namespace histree {

struct CorpusEntry {
    std::string name;
    Family family;
    int m = 0;  // cycle parameter when applicable
    DynamicNetworkTrace trace;
};

// All four families plus 200 seeded random traces, n in 2..8, T = 12.
inline std::vector<CorpusEntry> oracle_corpus() {
    std::vector<CorpusEntry> corpus;
    auto add = [&](std::string name, Family family, int m, DynamicNetworkTrace trace) {
        corpus.push_back({std::move(name), family, m, std::move(trace)});
    };
    const int rounds = 12;
    for (int n = 4; n <= 8; ++n)
        add("gn-" + std::to_string(n), Family::lower_bound_gn, 0,
            gen_lower_bound_gn(n, rounds));
    for (int n = 3; n <= 8; ++n)
        for (int m : {1, n / 2, n - 1}) {
            if (m < 1 || m >= n) continue;
            std::string name = "cycle-" + std::to_string(n) + "-" + std::to_string(m);
            bool seen = false;
            for (const auto& e : corpus) seen = seen || e.name == name;
            if (!seen) add(name, Family::cycle_to_path, m, gen_cycle_to_path(n, m, rounds));
        }
    for (int n = 2; n <= 8; ++n) {
        add("complete-" + std::to_string(n), Family::static_complete, 0,
            gen_static_complete(n, rounds));
        InputScheme two;
        two.follower_values = {"a", "b"};
        add("complete2-" + std::to_string(n), Family::static_complete, 0,
            gen_static_complete(n, rounds, two));
    }
    for (int s = 0; s < 200; ++s) {
        const int n = 2 + s % 7;
        const int extra = s % 3;
        const double loop_prob = (s % 5 == 4) ? 0.25 : 0.0;
        InputScheme scheme;
        if (s % 4 == 1) scheme.follower_values = {"a", "b"};
        if (s % 4 == 3) scheme.follower_values = {"a", "b", "c"};
        add("random-" + std::to_string(s), Family::random_connected, 0,
            gen_random_connected(n, rounds, extra, loop_prob,
                                 static_cast<std::uint64_t>(1000 + s), scheme));
    }
    return corpus;
}

// Families and random traces with n in 2..16 and T = 3n, long enough for
// the termination bound to be observable.
inline std::vector<CorpusEntry> bounds_corpus() {
    std::vector<CorpusEntry> corpus;
    auto add = [&](std::string name, Family family, int m, DynamicNetworkTrace trace) {
        corpus.push_back({std::move(name), family, m, std::move(trace)});
    };
    for (int n = 4; n <= 16; ++n)
        add("gn-" + std::to_string(n), Family::lower_bound_gn, 0, gen_lower_bound_gn(n, 3 * n));
    for (int m = 2; m <= 6; ++m) {
        add("cycle-" + std::to_string(2 * m) + "-" + std::to_string(m), Family::cycle_to_path,
            m, gen_cycle_to_path(2 * m, m, 6 * m));
        add("cycle-" + std::to_string(2 * m + 1) + "-" + std::to_string(m),
            Family::cycle_to_path, m, gen_cycle_to_path(2 * m + 1, m, 6 * m + 3));
    }
    for (int n = 2; n <= 16; ++n) {
        InputScheme scheme;
        if (n >= 3) scheme.follower_values = {"a", "b"};
        add("complete-" + std::to_string(n), Family::static_complete, 0,
            gen_static_complete(n, 3 * n, scheme));
    }
    for (int n = 2; n <= 16; ++n) {
        const int seeds = n <= 8 ? 4 : (n <= 12 ? 3 : 2);
        for (int s = 0; s < seeds; ++s) {
            const int extra = s % 3;
            const double loop_prob = (s % 2 == 1) ? 0.2 : 0.0;
            InputScheme scheme;
            if (s % 2 == 1) scheme.follower_values = {"a", "b"};
            add("random-" + std::to_string(n) + "-" + std::to_string(s),
                Family::random_connected, 0,
                gen_random_connected(n, 3 * n, extra, loop_prob,
                                     static_cast<std::uint64_t>(7000 + 97 * n + s), scheme));
        }
    }
    return corpus;
}

}  // namespace histree

// Command-line front end: generate traces, run the counting algorithms,
// verify against the brute-force oracles, and sweep experiment grids.
// Exit codes: 0 success, 1 verification failure, 2 usage or config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "histree/corpus.hpp"
#include "histree/dot.hpp"
#include "histree/histree.hpp"

namespace {

using namespace histree;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

Family parse_family(const std::string& name) {
    if (name == "gn") return Family::lower_bound_gn;
    if (name == "cycle-to-path" || name == "cycle") return Family::cycle_to_path;
    if (name == "complete") return Family::static_complete;
    if (name == "random") return Family::random_connected;
    throw config_error("unknown family '" + name + "'");
}

std::string describe(const CountingOutput& out) {
    if (out.unknown()) return "Unknown";
    std::ostringstream s;
    s << "{";
    bool first = true;
    for (const auto& [input, count] : *out.inventory) {
        if (!first) s << ", ";
        first = false;
        s << (input.leader ? "L:" : "") << input.value << " x" << count;
    }
    s << "} (total " << inventory_total(*out.inventory) << ")";
    return s.str();
}

int cmd_generate(const GeneratorSpec& spec, const std::string& out_path) {
    DynamicNetworkTrace trace = generate_trace(spec);
    if (out_path.empty() || out_path == "-")
        std::cout << trace_to_json(trace).dump(2) << '\n';
    else
        save_trace(trace, out_path);
    return kExitOk;
}

int cmd_run(const std::string& trace_path, const std::string& algorithm,
            const std::string& dot_path, const std::string& ground_truth_path,
            bool dump_events) {
    DynamicNetworkTrace trace = load_trace(trace_path);
    const Inventory truth = inventory(trace);

    ExecutionResult<CountingOutput> result;
    if (algorithm == "stabilizing")
        result = run_execution(trace, StabilizingCounting{});
    else if (algorithm == "terminating")
        result = run_execution(trace, TerminatingCounting{});
    else
        throw config_error("unknown algorithm '" + algorithm + "'");

    std::cout << "n=" << trace.n << " rounds=" << trace.rounds() << " algorithm=" << algorithm
              << '\n';
    if (result.stabilization_round)
        std::cout << "stabilization_round=" << *result.stabilization_round << '\n';
    if (result.termination_round)
        std::cout << "termination_round=" << *result.termination_round << '\n';
    else
        std::cout << "termination_round=none (no termination within " << trace.rounds()
                  << " rounds)\n";

    std::map<std::string, std::pair<CountingOutput, int>> final_outputs;
    for (int p = 1; p <= trace.n; ++p) {
        const auto& out = result.output_at(trace.rounds(), p);
        auto [it, inserted] = final_outputs.try_emplace(describe(out), out, 0);
        ++it->second.second;
    }
    for (const auto& [text, entry] : final_outputs)
        std::cout << "final output of " << entry.second << " process(es): " << text
                  << (entry.first.inventory && *entry.first.inventory == truth ? "  [correct]"
                                                                               : "")
                  << '\n';

    GroundTruth gt = build_ground_truth(trace);
    if (!ground_truth_path.empty()) {
        std::ofstream out(ground_truth_path);
        if (!out) throw error("cannot open " + ground_truth_path);
        out << to_dot(gt);
        std::cout << "ground truth written to " << ground_truth_path << '\n';
    }
    if (!dot_path.empty()) {
        View leader_view = view_of(gt, gt.node_of(leader_process(trace), trace.rounds()));
        std::ofstream out(dot_path);
        if (!out) throw error("cannot open " + dot_path);
        out << to_dot(leader_view);
        std::cout << "leader view written to " << dot_path << '\n';
    }
    if (dump_events) {
        View leader_view = view_of(gt, gt.node_of(leader_process(trace), trace.rounds()));
        CountingEvents events;
        events.on_guess = [](NodeId v, NodeId u, std::int64_t g) {
            std::cout << "  guess: node " << v << " <- guesser " << u << ", g=" << g << '\n';
        };
        events.on_counted = [](NodeId v, std::int64_t a, CountedVia via) {
            const char* how = via == CountedVia::leader ? "leader"
                              : via == CountedVia::confirmed_guess ? "confirmed guess"
                                                                   : "isle interior";
            std::cout << "  counted: node " << v << ", a=" << a << " (" << how << ")\n";
        };
        events.on_isle = [](const Isle& isle) {
            std::cout << "  isle resolved at node " << isle.root << ": " << isle.leaves.size()
                      << " leaves, " << isle.internals.size() << " internals\n";
        };
        events.on_cut = [](const std::vector<NodeId>& cut, int level, int depth,
                           std::int64_t total, bool accepted) {
            std::cout << "  cut: size " << cut.size() << ", deepest level " << level
                      << ", view depth " << depth << ", total " << total
                      << (accepted ? " -> accepted" : " -> rejected") << '\n';
        };
        std::cout << "terminating-count events on the leader's final view:\n";
        auto out = terminating_count(leader_view, &events);
        std::cout << "  result: " << describe(out) << '\n';
    }
    return kExitOk;
}

nlohmann::ordered_json verify_one(const DynamicNetworkTrace& trace, const std::string& name,
                                  bool& all_ok) {
    nlohmann::ordered_json entry;
    entry["trace"] = name;
    GroundTruth gt = build_ground_truth(trace);
    std::vector<std::string> violations;
    bool structure_ok = verify_ground_truth(gt, trace, &violations);
    entry["structure_ok"] = structure_ok;
    if (!structure_ok) entry["structure_violations"] = violations;
    auto stab = verify_counting_run(trace, CountingAlgorithmKind::stabilizing);
    auto term = verify_counting_run(trace, CountingAlgorithmKind::terminating);
    entry["stabilizing"] = stab.to_json();
    entry["terminating"] = term.to_json();
    all_ok = all_ok && structure_ok && stab.ok() && term.ok();
    return entry;
}

int cmd_verify(const std::string& trace_path, const std::string& corpus,
               const std::string& lower_bound, int lb_n, int lb_m) {
    nlohmann::ordered_json report;
    bool all_ok = true;

    if (!lower_bound.empty()) {
        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        if (lower_bound == "gn") {
            if (lb_n < 4) throw config_error("--lower-bound gn needs --n >= 4");
            const int n = lb_n;
            auto a = gen_lower_bound_gn(n, 2 * n);
            auto b = gen_lower_bound_gn(n + 1, 2 * n);
            auto gta = build_ground_truth(a);
            auto gtb = build_ground_truth(b);
            for (int r = 0; r <= 2 * n - 4; ++r) {
                bool iso = views_isomorphic(view_of(gta, gta.node_of(1, r)),
                                            view_of(gtb, gtb.node_of(1, r)));
                bool expected = r <= 2 * n - 5;
                checks.push_back({{"round", r},
                                  {"leaders_isomorphic", iso},
                                  {"expected", expected}});
                all_ok = all_ok && iso == expected;
            }
            auto term = verify_counting_run(a, CountingAlgorithmKind::terminating, 2 * n - 4);
            report["terminating_on_family"] = term.to_json();
            all_ok = all_ok && term.ok();
        } else if (lower_bound == "cycle" || lower_bound == "cycle-to-path") {
            if (lb_m < 2) throw config_error("--lower-bound cycle needs --m >= 2");
            const int m = lb_m;
            auto a = gen_cycle_to_path(2 * m, m, 3 * m);
            auto b = gen_cycle_to_path(2 * m + 1, m, 3 * m);
            auto gta = build_ground_truth(a);
            auto gtb = build_ground_truth(b);
            for (int r = 0; r <= 3 * m - 2; ++r) {
                bool iso = views_isomorphic(view_of(gta, gta.node_of(1, r)),
                                            view_of(gtb, gtb.node_of(1, r)));
                checks.push_back({{"round", r}, {"leaders_isomorphic", iso}, {"expected", true}});
                all_ok = all_ok && iso;
            }
        } else {
            throw config_error("unknown lower-bound family '" + lower_bound + "'");
        }
        report["lower_bound"] = lower_bound;
        report["checks"] = checks;
    } else if (!corpus.empty()) {
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        if (corpus == "default") {
            const char* dir = std::getenv("HISTREE_CORPUS_DIR");
            if (dir && *dir) {
                return cmd_verify("", dir, "", 0, 0);
            }
            for (const auto& entry : oracle_corpus())
                entries.push_back(verify_one(entry.trace, entry.name, all_ok));
        } else {
            // A directory of *.json traces.
            namespace fs = std::filesystem;
            std::vector<fs::path> paths;
            for (const auto& file : fs::directory_iterator(corpus))
                if (file.path().extension() == ".json") paths.push_back(file.path());
            std::sort(paths.begin(), paths.end());
            if (paths.empty()) throw config_error("no .json traces in " + corpus);
            for (const auto& path : paths)
                entries.push_back(verify_one(load_trace(path.string()), path.filename(), all_ok));
        }
        report["traces"] = entries;
    } else {
        report["traces"] = nlohmann::ordered_json::array(
            {verify_one(load_trace(trace_path), trace_path, all_ok)});
    }

    report["ok"] = all_ok;
    std::cout << report.dump(2) << '\n';
    return all_ok ? kExitOk : kExitVerificationFailure;
}

int cmd_experiment(const std::vector<std::string>& family_names, int n_from, int n_to,
                   int seeds, const std::string& algorithms, const std::string& out_path) {
    if (family_names.empty()) throw config_error("experiment grid has no families");
    if (n_from < 2 || n_to < n_from) throw config_error("experiment grid has an empty n range");
    if (seeds < 1) throw config_error("experiment needs at least one seed");

    std::vector<CountingAlgorithmKind> kinds;
    if (algorithms == "both" || algorithms == "stabilizing")
        kinds.push_back(CountingAlgorithmKind::stabilizing);
    if (algorithms == "both" || algorithms == "terminating")
        kinds.push_back(CountingAlgorithmKind::terminating);
    if (kinds.empty()) throw config_error("unknown algorithm selection '" + algorithms + "'");

    std::ostringstream csv;
    csv << "family,n,m,seed,algorithm,stabilization_round,termination_round,correct\n";
    for (const auto& family_name_str : family_names) {
        Family family = parse_family(family_name_str);
        for (int n = n_from; n <= n_to; ++n) {
            if (family == Family::lower_bound_gn && n < 4) continue;
            const int m = family == Family::cycle_to_path ? std::max(1, n / 2) : 0;
            for (int seed = 0; seed < seeds; ++seed) {
                GeneratorSpec spec;
                spec.family = family;
                spec.n = n;
                spec.m = m;
                spec.rounds = 3 * n;
                spec.seed = static_cast<std::uint64_t>(seed);
                spec.extra_edge_budget = seed % 3;
                spec.loop_and_parallel_prob = seed % 2 ? 0.2 : 0.0;
                DynamicNetworkTrace trace = generate_trace(spec);
                for (auto kind : kinds) {
                    auto rep = verify_counting_run(trace, kind);
                    const bool bound_ok =
                        kind == CountingAlgorithmKind::stabilizing
                            ? (rep.stabilization_round &&
                               *rep.stabilization_round <= 2 * n - 2)
                            : (rep.termination_round && *rep.termination_round <= 3 * n - 2);
                    csv << family_name(family) << ',' << n << ','
                        << (family == Family::cycle_to_path ? std::to_string(m) : "") << ','
                        << (family == Family::random_connected ? std::to_string(seed) : "0")
                        << ',' << rep.algorithm << ','
                        << (rep.stabilization_round ? std::to_string(*rep.stabilization_round)
                                                    : "")
                        << ','
                        << (rep.termination_round ? std::to_string(*rep.termination_round) : "")
                        << ',' << (rep.ok() && bound_ok ? "true" : "false") << '\n';
                }
                if (family != Family::random_connected) break;  // one cell per n
            }
        }
    }
    if (out_path.empty() || out_path == "-")
        std::cout << csv.str();
    else {
        std::ofstream out(out_path);
        if (!out) throw error("cannot open " + out_path);
        out << csv.str();
        std::cout << "experiment results written to " << out_path << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"history-tree toolkit for anonymous dynamic networks"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "generate a trace and write it as JSON");
    std::string g_family = "random";
    GeneratorSpec spec;
    std::string g_out;
    std::vector<std::string> g_values;
    generate->add_option("--family", g_family, "gn | cycle-to-path | complete | random");
    generate->add_option("--n", spec.n, "number of processes");
    generate->add_option("--m", spec.m, "cycle-to-path switch round");
    generate->add_option("--rounds", spec.rounds, "trace length T");
    generate->add_option("--seed", spec.seed, "random seed");
    generate->add_option("--extra-edges", spec.extra_edge_budget,
                         "extra random edges per round (random family)");
    generate->add_option("--loop-prob", spec.loop_and_parallel_prob,
                         "probability of a self-loop plus a parallel link per round");
    generate->add_option("--leader-value", spec.scheme.leader_value, "leader input value");
    generate->add_option("--values", g_values, "non-leader input values, assigned round-robin");
    generate->add_option("-o,--out", g_out, "output path (default: stdout)");

    // run
    auto* run = app.add_subcommand("run", "simulate a counting algorithm over a trace");
    std::string r_trace, r_alg = "terminating", r_dot, r_gt;
    bool r_events = false;
    run->add_option("trace", r_trace, "trace JSON file")->required();
    run->add_option("--alg", r_alg, "stabilizing | terminating");
    run->add_option("--dot", r_dot, "write the leader's final view as DOT");
    run->add_option("--ground-truth", r_gt, "write the full tree with anonymities as DOT");
    run->add_flag("--events", r_events, "dump the terminating algorithm's decision events");

    // verify
    auto* verify = app.add_subcommand("verify", "run the brute-force oracle suite");
    std::string v_trace, v_corpus, v_lower;
    int v_n = 0, v_m = 0;
    verify->add_option("trace", v_trace, "trace JSON file");
    verify->add_option("--corpus", v_corpus, "'default' or a directory of trace files");
    verify->add_option("--lower-bound", v_lower, "check a lower-bound family: gn | cycle");
    verify->add_option("--n", v_n, "size parameter for --lower-bound gn");
    verify->add_option("--m", v_m, "parameter for --lower-bound cycle");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "sweep a grid and emit CSV");
    std::vector<std::string> e_families;
    int e_n_from = 4, e_n_to = 12, e_seeds = 3;
    std::string e_alg = "both", e_out;
    experiment->add_option("--families", e_families, "families to sweep")->delimiter(',');
    experiment->add_option("--n-from", e_n_from, "smallest n");
    experiment->add_option("--n-to", e_n_to, "largest n");
    experiment->add_option("--seeds", e_seeds, "seeds per cell (random family)");
    experiment->add_option("--alg", e_alg, "stabilizing | terminating | both");
    experiment->add_option("-o,--out", e_out, "CSV output path (default: stdout)");

    try {
        app.parse(argc, argv);
        if (generate->parsed()) {
            spec.family = parse_family(g_family);
            if (!g_values.empty()) spec.scheme.follower_values = g_values;
            return cmd_generate(spec, g_out);
        }
        if (run->parsed()) return cmd_run(r_trace, r_alg, r_dot, r_gt, r_events);
        if (verify->parsed()) {
            if (v_trace.empty() && v_corpus.empty() && v_lower.empty())
                throw config_error("verify needs a trace, --corpus, or --lower-bound");
            return cmd_verify(v_trace, v_corpus, v_lower, v_n, v_m);
        }
        if (experiment->parsed())
            return cmd_experiment(e_families, e_n_from, e_n_to, e_seeds, e_alg, e_out);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const validation_error& e) {
        std::cerr << "invalid trace: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerificationFailure;
    }
}

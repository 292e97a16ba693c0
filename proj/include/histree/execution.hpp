#pragma once

// Round-synchronous execution of a local algorithm over a trace. In round i
// every process broadcasts its round-(i-1) state along each incident link (a
// link of multiplicity m delivers m copies; a self-loop of multiplicity m
// delivers m copies of the process's own state), then applies the
// algorithm's step function. All processes run the same deterministic
// algorithm; a single execution is sequential.
//
// An algorithm A provides:
//   A::State  init(const ProcessInput&)
//   A::State  step(const State& previous, const Received<State>& received)
//   A::Output output(const State&)
//   bool      is_terminal(const State&)
// Once a state is terminal, its output and terminal flag must never change
// again; the engine checks this. (Histories keep being exchanged after
// termination so that other processes can still complete; what a terminal
// process has decided is frozen.)

#include <concepts>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "histree/model.hpp"

namespace histree {

// An execution error carries the 1-based round at which the algorithm
// signalled an inconsistency.
struct execution_error : error {
    execution_error(int round, const std::string& what)
        : error("round " + std::to_string(round) + ": " + what), round(round) {}
    int round;
};

template <typename State>
using Received = std::vector<std::pair<const State*, int>>;

template <typename A>
concept LocalAlgorithm = requires(const A a, const typename A::State s,
                                  const Received<typename A::State> r, const ProcessInput in) {
    { a.init(in) } -> std::same_as<typename A::State>;
    { a.step(s, r) } -> std::same_as<typename A::State>;
    { a.output(s) } -> std::same_as<typename A::Output>;
    { a.is_terminal(s) } -> std::same_as<bool>;
};

template <typename Output>
struct ExecutionResult {
    // outputs[r][p-1] = output of process p after round r, r = 0..T.
    std::vector<std::vector<Output>> outputs;
    // Earliest round from which every process's output stays constant to the
    // end of the trace.
    std::optional<int> stabilization_round;
    // Earliest round at the end of which every process is terminal, if that
    // happens within the trace. Absence means "did not terminate within T",
    // which is a result, not a failure.
    std::optional<int> termination_round;

    const Output& output_at(int round, int process) const {
        return outputs[static_cast<std::size_t>(round)][static_cast<std::size_t>(process - 1)];
    }
};

template <LocalAlgorithm A>
ExecutionResult<typename A::Output> run_execution(const DynamicNetworkTrace& trace,
                                                  const A& algorithm) {
    using State = typename A::State;
    validate_trace(trace);

    ExecutionResult<typename A::Output> result;
    std::vector<State> states;
    states.reserve(static_cast<std::size_t>(trace.n));
    for (int p = 1; p <= trace.n; ++p) states.push_back(algorithm.init(trace.input_of(p)));

    auto record_round = [&](int round) {
        std::vector<typename A::Output> outs;
        outs.reserve(states.size());
        bool all_terminal = true;
        for (const auto& s : states) {
            outs.push_back(algorithm.output(s));
            all_terminal = all_terminal && algorithm.is_terminal(s);
        }
        result.outputs.push_back(std::move(outs));
        if (all_terminal && !result.termination_round) result.termination_round = round;
    };
    record_round(0);

    for (int round = 1; round <= trace.rounds(); ++round) {
        const auto& snap = trace.snapshots[static_cast<std::size_t>(round - 1)];
        std::vector<Received<State>> received(static_cast<std::size_t>(trace.n));
        for (const auto& [edge, mult] : snap.edges) {
            auto [u, v] = edge;
            received[static_cast<std::size_t>(u - 1)].emplace_back(
                &states[static_cast<std::size_t>(v - 1)], mult);
            if (u != v)
                received[static_cast<std::size_t>(v - 1)].emplace_back(
                    &states[static_cast<std::size_t>(u - 1)], mult);
        }

        std::vector<State> next;
        next.reserve(states.size());
        for (int p = 1; p <= trace.n; ++p) {
            const auto& prev = states[static_cast<std::size_t>(p - 1)];
            State stepped = [&] {
                try {
                    return algorithm.step(prev, received[static_cast<std::size_t>(p - 1)]);
                } catch (const execution_error&) {
                    throw;
                } catch (const error& e) {
                    throw execution_error(round, e.what());
                }
            }();
            if (algorithm.is_terminal(prev)) {
                if (!algorithm.is_terminal(stepped) ||
                    !(algorithm.output(stepped) == algorithm.output(prev)))
                    throw execution_error(round, "terminal output changed");
            }
            next.push_back(std::move(stepped));
        }
        states = std::move(next);
        record_round(round);
    }

    // Earliest suffix over which every process's output is constant.
    int stab = trace.rounds();
    while (stab > 0 && result.outputs[static_cast<std::size_t>(stab - 1)] ==
                           result.outputs[static_cast<std::size_t>(stab)])
        --stab;
    result.stabilization_round = stab;
    return result;
}

}  // namespace histree

#pragma once

// JSON (de)serialization of network traces:
//   { "n": int,
//     "inputs": [{"leader": bool, "value": string}, ...],
//     "rounds": [ [[u, v, mult], ...], ... ] }
// Vertex ids are 1-based; a self-loop is encoded as [u, u, mult].

#include <fstream>
#include <string>

#include <json.hpp>

#include "histree/model.hpp"

namespace histree {

inline nlohmann::ordered_json trace_to_json(const DynamicNetworkTrace& trace) {
    nlohmann::ordered_json j;
    j["n"] = trace.n;
    auto& inputs = j["inputs"] = nlohmann::ordered_json::array();
    for (const auto& input : trace.inputs)
        inputs.push_back({{"leader", input.leader}, {"value", input.value}});
    auto& rounds = j["rounds"] = nlohmann::ordered_json::array();
    for (const auto& snap : trace.snapshots) {
        nlohmann::ordered_json round = nlohmann::ordered_json::array();
        for (const auto& [edge, mult] : snap.edges)
            round.push_back({edge.first, edge.second, mult});
        rounds.push_back(std::move(round));
    }
    return j;
}

inline DynamicNetworkTrace trace_from_json(const nlohmann::json& j) {
    DynamicNetworkTrace trace;
    try {
        trace.n = j.at("n").get<int>();
        for (const auto& entry : j.at("inputs")) {
            ProcessInput input;
            input.leader = entry.at("leader").get<bool>();
            input.value = entry.at("value").get<std::string>();
            trace.inputs.push_back(std::move(input));
        }
        for (const auto& round : j.at("rounds")) {
            MultigraphSnapshot snap;
            snap.n = trace.n;
            for (const auto& edge : round) {
                if (!edge.is_array() || edge.size() != 3)
                    throw validation_error("edge entries must be [u, v, mult] triples");
                snap.add_edge(edge[0].get<int>(), edge[1].get<int>(), edge[2].get<int>());
            }
            trace.snapshots.push_back(std::move(snap));
        }
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("malformed trace JSON: ") + e.what());
    }
    validate_trace(trace);
    return trace;
}

inline void save_trace(const DynamicNetworkTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw error("cannot open " + path + " for writing");
    out << trace_to_json(trace).dump(2) << '\n';
}

inline DynamicNetworkTrace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("cannot parse ") + path + ": " + e.what());
    }
    return trace_from_json(j);
}

}  // namespace histree

#pragma once

// Graphviz export of history trees and views, laid out level by level.
// Black edges are solid; red edges are dashed and carry a multiplicity
// label when it exceeds 1. Node labels show the input value, a '*' for the
// leader input, and the anonymity when a ground truth provides one.

#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "histree/history_tree.hpp"
#include "histree/view.hpp"

namespace histree {

inline void write_dot(std::ostream& out, const HistoryTree& tree,
                      const std::vector<std::int64_t>* alpha = nullptr,
                      NodeId highlight = kNoNode) {
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') q += '\\';
            q += c;
        }
        return q + "\"";
    };

    out << "graph history {\n";
    out << "  rankdir=TB;\n  node [shape=circle, fontsize=10];\n";
    for (int t = -1; t <= tree.depth(); ++t) {
        out << "  { rank=same;";
        for (NodeId id : tree.level(t)) out << " n" << id << ';';
        out << " }\n";
    }
    for (NodeId id = 0; id < static_cast<NodeId>(tree.nodes.size()); ++id) {
        const auto& node = tree.node(id);
        std::string label;
        if (id == tree.root()) {
            label = "r";
        } else {
            label = node.label.value;
            if (node.label.leader) label += '*';
        }
        if (alpha && id != tree.root())
            label += "\\n" + std::to_string((*alpha)[static_cast<std::size_t>(id)]);
        out << "  n" << id << " [label=" << quote(label);
        if (id == highlight) out << ", penwidth=2.5";
        out << "];\n";
    }
    for (NodeId id = 0; id < static_cast<NodeId>(tree.nodes.size()); ++id) {
        const auto& node = tree.node(id);
        if (node.parent != kNoNode) out << "  n" << node.parent << " -- n" << id << ";\n";
        for (const auto& [target, mult] : node.red_up) {
            out << "  n" << target << " -- n" << id << " [style=dashed, color=red";
            if (mult > 1) out << ", label=\"" << mult << "\"";
            out << "];\n";
        }
    }
    out << "}\n";
}

inline std::string to_dot(const View& view) {
    std::ostringstream out;
    write_dot(out, view.tree, nullptr, view.viewpoint);
    return out.str();
}

inline std::string to_dot(const GroundTruth& gt) {
    std::ostringstream out;
    write_dot(out, gt.tree, &gt.alpha);
    return out.str();
}

}  // namespace histree

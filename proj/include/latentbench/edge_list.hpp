#pragma once

#include "latentbench/graph.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace latentbench {

/// Shared plain-text graph format:
///
///     # vertices: 4
///     # hidden: 0
///     # macro: 0 0 1 1
///     0 -> 1 0.5
///     2 <-> 3
///
/// Directed lines are tail -> head with an optional weight; bidirected lines
/// carry no weight. Other `# key: value` comments are kept as metadata.
struct EdgeList {
    struct WeightedEdge {
        Edge edge;
        double weight = 1.0;
    };

    int vertices = 0;
    std::vector<WeightedEdge> directed;
    std::vector<UEdge> bidirected;
    std::map<std::string, std::string> meta;
    /// Indices listed on the `# hidden:` line.
    std::vector<int> hidden;
    /// Per-vertex macro ids from the `# macro:` line (empty when absent).
    std::vector<int> macro;

    Dag to_dag() const;
    Admg to_admg() const;
};

/// Parses the edge-list format. Throws ParseError with the offending line.
EdgeList parse_edge_list(std::string_view text);

/// Serializes a weighted DAG, including hidden and macro metadata lines.
std::string format_dag(const Dag& dag, const std::map<std::string, std::string>& meta = {});

/// Serializes an ADMG; `hidden` is omitted since ADMGs here live on observed
/// vertices only.
std::string format_admg(const Admg& g, const std::map<std::string, std::string>& meta = {});

}  // namespace latentbench

#pragma once

#include "latentbench/graph.hpp"

#include <string>
#include <vector>

namespace latentbench {

enum class ProjectionMethod { algorithm1, mag_oracle };

std::string to_string(ProjectionMethod method);

struct ProjectionResult {
    /// Mixed graph over the observed vertices, reindexed 0..m-1.
    Admg admg;
    /// observed[i] is the DAG vertex behind ADMG vertex i.
    std::vector<int> observed;
    ProjectionMethod method = ProjectionMethod::algorithm1;
};

/// Eliminates hidden vertices one at a time in ascending topological order.
/// For each, unadjacent pairs of its current children are joined (directed
/// ancestor to descendant when the original DAG orders them, bidirected
/// otherwise), and its current parents get a directed edge to each current
/// child they are not yet adjacent to.
ProjectionResult dag_to_ancestral_algorithm1(const Dag& dag, const VertexSet& hidden);

/// Observed u, v adjacent iff no subset of the other observed vertices
/// d-separates them; oriented by ancestry in the DAG, bidirected otherwise.
/// Throws TooLarge above `max_observed` observed vertices.
ProjectionResult mag_oracle(const Dag& dag, const VertexSet& hidden, int max_observed = 14);

struct CiMismatch {
    /// DAG vertex ids.
    int x = 0;
    int y = 0;
    std::vector<int> cond;
    bool dag_separated = false;
    bool admg_separated = false;
};

/// Exhaustive comparison of d-separation in the DAG with m-separation in an
/// ADMG over the observed vertices (reindexed as in ProjectionResult).
/// Throws TooLarge above `max_observed` observed vertices.
std::vector<CiMismatch> ci_equivalence_check(const Dag& dag, const VertexSet& hidden, const Admg& admg,
                                             int max_observed = 8);

struct AgreementStats {
    int pairs = 0;
    int adjacency_agree = 0;
    /// Pairs adjacent in both graphs with the same edge type and direction.
    int orientation_agree = 0;
    int adjacent_in_both = 0;
    bool identical = false;
};

AgreementStats compare_admgs(const Admg& a, const Admg& b);

}  // namespace latentbench

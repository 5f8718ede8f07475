#pragma once

#include "latentbench/graph.hpp"
#include "latentbench/rng.hpp"

#include <string>
#include <string_view>

namespace latentbench {

enum class HiddenPolicy { roots_only, random_confounders, intermediate_confounders };

std::string to_string(HiddenPolicy policy);
/// Throws ConfigInvalid for unknown names.
HiddenPolicy parse_hidden_policy(std::string_view name);

struct HierarchyConfig {
    int macro_count = 4;
    double macro_edge_prob = 0.5;
    int micro_min = 3;
    int micro_max = 3;
    double micro_edge_prob = 0.5;
    int inter_edges_per_macro_edge = 1;
    int expected_confounders = 0;
    HiddenPolicy hidden_policy = HiddenPolicy::random_confounders;
    int hidden_count = 0;

    /// Throws ConfigInvalid naming the offending field.
    void validate() const;
};

struct GenOutcome {
    Dag dag;
    VertexSet hidden;
    /// Vertices with at least two children.
    VertexSet confounders;
};

/// Random DAG over n vertices: a strictly lower-triangular Bernoulli(p) mask
/// conjugated by a uniform permutation. Edge weights are 1.
Dag random_dag(int n, double edge_prob, Rng& rng);

/// Macro DAG, one local micro DAG per macro block, then
/// `inter_edges_per_macro_edge` random micro edges per macro edge. Vertices
/// are numbered block by block; labels carry the macro id. Edge weights are 1.
Dag generate_hierarchical_dag(const HierarchyConfig& cfg, Rng& rng);

VertexSet confounders(const Dag& dag);

/// Scans vertices in ascending topological rank and gives each
/// non-confounder extra children (the lowest-ranked later vertices that are
/// not yet children) until `target` vertices have two or more children. New
/// edges get weight 1. Throws Unachievable when target > max(0, n - 2).
Dag enforce_confounders(const Dag& dag, int target);

/// Uniform subset of the policy's candidate pool. Throws
/// NotEnoughCandidates when the pool is smaller than `count`.
VertexSet select_hidden(const Dag& dag, HiddenPolicy policy, int count, Rng& rng);

/// Full structural stage: generate, enforce, select. The returned DAG is
/// labelled with the hidden set.
GenOutcome generate_outcome(const HierarchyConfig& cfg, Rng& rng);

}  // namespace latentbench

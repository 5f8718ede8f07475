#pragma once

#include "latentbench/graph.hpp"

namespace latentbench {

struct ScoreCard {
    double ancestral_accuracy = 1.0;
    double directed_precision = 1.0;
    double directed_recall = 1.0;
    double bidirected_precision = 1.0;
    double bidirected_recall = 1.0;
    long long pair_count = 0;
};

/// Fraction of unordered pairs whose relation (u before v, v before u, or
/// neither) under the directed parts agrees. An empty pair set scores 1.
/// Throws VertexMismatch.
double ancestral_accuracy(const Admg& truth, const Admg& pred);

/// Precision and recall for directed (ordered) and bidirected (unordered)
/// edges. A zero denominator scores 1. Throws VertexMismatch.
ScoreCard edge_scores(const Admg& truth, const Admg& pred);

/// edge_scores plus ancestral_accuracy.
ScoreCard score(const Admg& truth, const Admg& pred);

}  // namespace latentbench

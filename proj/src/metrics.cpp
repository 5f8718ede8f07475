#include "latentbench/metrics.hpp"

#include "latentbench/errors.hpp"

#include <algorithm>
#include <iterator>

namespace latentbench {

namespace {

void require_same_size(const Admg& a, const Admg& b) {
    if (a.size() != b.size())
        throw VertexMismatch("truth has " + std::to_string(a.size()) + " vertices, prediction " +
                             std::to_string(b.size()));
}

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

template <class T>
std::size_t overlap(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    return both.size();
}

}  // namespace

double ancestral_accuracy(const Admg& truth, const Admg& pred) {
    require_same_size(truth, pred);
    const int n = truth.size();
    std::vector<VertexSet> at(n), ap(n);
    for (int v = 0; v < n; ++v) {
        at[v] = ancestors(truth, v);
        ap[v] = ancestors(pred, v);
    }
    auto relation = [](const std::vector<VertexSet>& anc, int u, int v) {
        if (anc[v].test(u)) return 1;
        if (anc[u].test(v)) return 2;
        return 0;
    };
    long long matches = 0;
    long long pairs = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            ++pairs;
            if (relation(at, u, v) == relation(ap, u, v)) ++matches;
        }
    return pairs == 0 ? 1.0 : static_cast<double>(matches) / static_cast<double>(pairs);
}

ScoreCard edge_scores(const Admg& truth, const Admg& pred) {
    require_same_size(truth, pred);
    ScoreCard s;
    // Admg keeps both edge lists sorted and deduplicated.
    const auto d = overlap(truth.directed(), pred.directed());
    const auto b = overlap(truth.bidirected(), pred.bidirected());
    s.directed_precision = ratio(d, pred.directed().size());
    s.directed_recall = ratio(d, truth.directed().size());
    s.bidirected_precision = ratio(b, pred.bidirected().size());
    s.bidirected_recall = ratio(b, truth.bidirected().size());
    const long long n = truth.size();
    s.pair_count = n * (n - 1) / 2;
    return s;
}

ScoreCard score(const Admg& truth, const Admg& pred) {
    ScoreCard s = edge_scores(truth, pred);
    s.ancestral_accuracy = ancestral_accuracy(truth, pred);
    return s;
}

}  // namespace latentbench

#include "latentbench/hier_gen.hpp"

#include "latentbench/errors.hpp"

#include <algorithm>
#include <numeric>

namespace latentbench {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigInvalid(what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::string to_string(HiddenPolicy policy) {
    switch (policy) {
        case HiddenPolicy::roots_only: return "roots_only";
        case HiddenPolicy::random_confounders: return "random_confounders";
        case HiddenPolicy::intermediate_confounders: return "intermediate_confounders";
    }
    return "unknown";
}

HiddenPolicy parse_hidden_policy(std::string_view name) {
    if (name == "roots_only") return HiddenPolicy::roots_only;
    if (name == "random_confounders") return HiddenPolicy::random_confounders;
    if (name == "intermediate_confounders") return HiddenPolicy::intermediate_confounders;
    throw ConfigInvalid("unknown hidden policy '" + std::string(name) + "'");
}

void HierarchyConfig::validate() const {
    require(macro_count >= 1, "macro_count must be >= 1");
    require(is_probability(macro_edge_prob), "macro_edge_prob must lie in [0,1]");
    require(micro_min >= 1 && micro_min <= micro_max, "micro range must satisfy 1 <= lo <= hi");
    require(is_probability(micro_edge_prob), "micro_edge_prob must lie in [0,1]");
    require(inter_edges_per_macro_edge >= 1, "inter_edges_per_macro_edge must be >= 1");
    require(expected_confounders >= 0, "expected_confounders must be >= 0");
    require(hidden_count >= 0, "hidden_count must be >= 0");
    // Every policy draws from confounders.
    require(hidden_count <= expected_confounders, "hidden_count must not exceed expected_confounders");
}

Dag random_dag(int n, double edge_prob, Rng& rng) {
    if (n < 0 || !is_probability(edge_prob)) throw ConfigInvalid("random_dag: bad size or probability");
    std::bernoulli_distribution coin(edge_prob);
    Matrix lower = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (coin(rng)) lower(i, j) = 1.0;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    // W = P L P^T with P e_i = e_perm[i].
    Matrix w = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (lower(i, j) != 0.0) w(perm[i], perm[j]) = 1.0;
    return Dag(std::move(w));
}

Dag generate_hierarchical_dag(const HierarchyConfig& cfg, Rng& rng) {
    cfg.validate();
    const Dag macro = random_dag(cfg.macro_count, cfg.macro_edge_prob, rng);

    std::uniform_int_distribution<int> block_size(cfg.micro_min, cfg.micro_max);
    std::vector<int> offset(cfg.macro_count + 1, 0);
    std::vector<Dag> local;
    for (int b = 0; b < cfg.macro_count; ++b) {
        const int size = block_size(rng);
        local.push_back(random_dag(size, cfg.micro_edge_prob, rng));
        offset[b + 1] = offset[b] + size;
    }

    const int n = offset.back();
    Matrix w = Matrix::Zero(n, n);
    std::vector<VertexLabel> labels(n);
    for (int b = 0; b < cfg.macro_count; ++b) {
        for (int v = offset[b]; v < offset[b + 1]; ++v) labels[v].macro_id = b;
        w.block(offset[b], offset[b], local[b].size(), local[b].size()) = local[b].weights();
    }
    for (const auto& e : macro.edges()) {
        std::uniform_int_distribution<int> pick_tail(offset[e.tail], offset[e.tail + 1] - 1);
        std::uniform_int_distribution<int> pick_head(offset[e.head], offset[e.head + 1] - 1);
        for (int k = 0; k < cfg.inter_edges_per_macro_edge; ++k) {
            const int tail = pick_tail(rng);
            const int head = pick_head(rng);
            w(head, tail) = 1.0;
        }
    }
    return Dag(std::move(w), std::move(labels));
}

VertexSet confounders(const Dag& dag) {
    VertexSet out(dag.size());
    for (int v = 0; v < dag.size(); ++v)
        if (dag.children(v).size() >= 2) out.set(v);
    return out;
}

Dag enforce_confounders(const Dag& dag, int target) {
    const int n = dag.size();
    if (target < 0) throw InvariantViolation("confounder target must be >= 0");
    const int attainable = std::max(0, n - 2);
    if (target > attainable) throw Unachievable(static_cast<std::size_t>(target), attainable);

    int count = static_cast<int>(confounders(dag).count());
    if (count >= target) return dag;

    Matrix w = dag.weights();
    const auto& order = dag.topological_order();
    for (int rank = 0; rank < n && count < target; ++rank) {
        const int u = order[rank];
        int kids = static_cast<int>(dag.children(u).size());
        if (kids >= 2) continue;
        // Only later-ranked vertices keep the original order valid.
        for (int later = rank + 1; later < n && kids < 2; ++later) {
            const int v = order[later];
            if (w(v, u) != 0.0) continue;
            w(v, u) = 1.0;
            ++kids;
        }
        if (kids >= 2) ++count;
    }
    return Dag(std::move(w), dag.labels());
}

VertexSet select_hidden(const Dag& dag, HiddenPolicy policy, int count, Rng& rng) {
    if (count < 0) throw InvariantViolation("hidden count must be >= 0");
    std::vector<int> pool;
    for (int v = 0; v < dag.size(); ++v) {
        if (dag.children(v).size() < 2) continue;
        const bool root = dag.parents(v).empty();
        if (policy == HiddenPolicy::roots_only && !root) continue;
        if (policy == HiddenPolicy::intermediate_confounders && root) continue;
        pool.push_back(v);
    }
    VertexSet hidden(dag.size());
    if (count == 0) return hidden;
    if (static_cast<int>(pool.size()) < count)
        throw NotEnoughCandidates(static_cast<std::size_t>(count), pool.size());
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int i = 0; i < count; ++i) hidden.set(pool[i]);
    return hidden;
}

GenOutcome generate_outcome(const HierarchyConfig& cfg, Rng& rng) {
    Dag dag = generate_hierarchical_dag(cfg, rng);
    dag = enforce_confounders(dag, cfg.expected_confounders);
    VertexSet hidden = select_hidden(dag, cfg.hidden_policy, cfg.hidden_count, rng);
    dag = dag.with_hidden(hidden);
    return {dag, hidden, confounders(dag)};
}

}  // namespace latentbench

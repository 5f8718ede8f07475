#include "latentbench/ancestralize.hpp"

#include "latentbench/errors.hpp"

#include <algorithm>

namespace latentbench {

namespace {

std::vector<int> observed_vertices(const Dag& dag, const VertexSet& hidden) {
    if (static_cast<int>(hidden.size()) != dag.size())
        throw InvariantViolation("hidden set universe does not match the DAG");
    std::vector<int> out;
    for (int v = 0; v < dag.size(); ++v)
        if (!hidden.test(v)) out.push_back(v);
    return out;
}

std::vector<int> reindex(const Dag& dag, const std::vector<int>& observed) {
    std::vector<int> index(dag.size(), -1);
    for (std::size_t i = 0; i < observed.size(); ++i) index[observed[i]] = static_cast<int>(i);
    return index;
}

// Mark on the pair (u, v) as seen from u: 0 none, 1 u -> v, 2 v -> u, 3 u <-> v.
int mark(const Admg& g, int u, int v) {
    if (g.has_directed(u, v)) return 1;
    if (g.has_directed(v, u)) return 2;
    if (g.has_bidirected(u, v)) return 3;
    return 0;
}

class WorkingGraph {
public:
    explicit WorkingGraph(const Dag& dag)
        : n_(dag.size()), dir_(n_, std::vector<char>(n_, 0)), bi_(n_, std::vector<char>(n_, 0)), alive_(n_, 1) {
        for (const auto& e : dag.edges()) dir_[e.tail][e.head] = 1;
    }

    bool adjacent(int a, int b) const { return dir_[a][b] || dir_[b][a] || bi_[a][b]; }
    void add_directed(int a, int b) { dir_[a][b] = 1; }
    void add_bidirected(int a, int b) { bi_[a][b] = bi_[b][a] = 1; }

    std::vector<int> children(int v) const {
        std::vector<int> out;
        for (int u = 0; u < n_; ++u)
            if (alive_[u] && dir_[v][u]) out.push_back(u);
        return out;
    }

    std::vector<int> parents(int v) const {
        std::vector<int> out;
        for (int u = 0; u < n_; ++u)
            if (alive_[u] && dir_[u][v]) out.push_back(u);
        return out;
    }

    void remove(int v) { alive_[v] = 0; }

    Admg restrict_to(const std::vector<int>& keep, const std::vector<int>& index) const {
        std::vector<Edge> d;
        std::vector<UEdge> b;
        for (int a : keep)
            for (int c : keep) {
                if (dir_[a][c]) d.push_back({index[a], index[c]});
                if (a < c && bi_[a][c]) b.emplace_back(index[a], index[c]);
            }
        return Admg(static_cast<int>(keep.size()), std::move(d), std::move(b));
    }

private:
    int n_;
    std::vector<std::vector<char>> dir_;
    std::vector<std::vector<char>> bi_;
    std::vector<char> alive_;
};

}  // namespace

std::string to_string(ProjectionMethod method) {
    return method == ProjectionMethod::algorithm1 ? "algorithm1" : "mag_oracle";
}

ProjectionResult dag_to_ancestral_algorithm1(const Dag& dag, const VertexSet& hidden) {
    const auto observed = observed_vertices(dag, hidden);
    const int n = dag.size();
    std::vector<VertexSet> anc(n);
    for (int v = 0; v < n; ++v) anc[v] = ancestors(dag, v);

    WorkingGraph g(dag);
    for (int h : dag.topological_order()) {
        if (!hidden.test(h)) continue;
        const auto kids = g.children(h);
        for (std::size_t i = 0; i < kids.size(); ++i)
            for (std::size_t j = i + 1; j < kids.size(); ++j) {
                const int d1 = kids[i];
                const int d2 = kids[j];
                if (g.adjacent(d1, d2)) continue;
                if (anc[d2].test(d1))
                    g.add_directed(d1, d2);
                else if (anc[d1].test(d2))
                    g.add_directed(d2, d1);
                else
                    g.add_bidirected(d1, d2);
            }
        for (int a : g.parents(h))
            for (int d : kids)
                if (!g.adjacent(a, d)) g.add_directed(a, d);
        g.remove(h);
    }
    return {g.restrict_to(observed, reindex(dag, observed)), observed, ProjectionMethod::algorithm1};
}

ProjectionResult mag_oracle(const Dag& dag, const VertexSet& hidden, int max_observed) {
    const auto observed = observed_vertices(dag, hidden);
    const int m = static_cast<int>(observed.size());
    if (m > max_observed)
        throw TooLarge("mag_oracle enumerates subsets of " + std::to_string(m) + " observed vertices (limit " +
                       std::to_string(max_observed) + ")");
    const int n = dag.size();
    const Separator sep(dag);
    std::vector<VertexSet> anc(n);
    for (int v = 0; v < n; ++v) anc[v] = ancestors(dag, v);

    std::vector<Edge> directed;
    std::vector<UEdge> bidirected;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            std::vector<int> others;
            for (int k = 0; k < m; ++k)
                if (k != i && k != j) others.push_back(observed[k]);
            bool separable = false;
            const std::uint64_t subsets = std::uint64_t{1} << others.size();
            for (std::uint64_t mask = 0; mask < subsets && !separable; ++mask) {
                SeparationQuery q{observed[i], observed[j], VertexSet(n)};
                for (std::size_t k = 0; k < others.size(); ++k)
                    if (mask >> k & 1U) q.cond.set(others[k]);
                separable = sep.separated(q);
            }
            if (separable) continue;
            if (anc[observed[j]].test(observed[i]))
                directed.push_back({i, j});
            else if (anc[observed[i]].test(observed[j]))
                directed.push_back({j, i});
            else
                bidirected.emplace_back(i, j);
        }
    return {Admg(m, std::move(directed), std::move(bidirected)), observed, ProjectionMethod::mag_oracle};
}

std::vector<CiMismatch> ci_equivalence_check(const Dag& dag, const VertexSet& hidden, const Admg& admg,
                                             int max_observed) {
    const auto observed = observed_vertices(dag, hidden);
    const int m = static_cast<int>(observed.size());
    if (admg.size() != m) throw VertexMismatch("ADMG size differs from the observed vertex count");
    if (m > max_observed)
        throw TooLarge("CI check enumerates subsets of " + std::to_string(m) + " observed vertices (limit " +
                       std::to_string(max_observed) + ")");
    const int n = dag.size();
    const Separator dsep(dag);
    const Separator msep(admg);
    std::vector<CiMismatch> out;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            std::vector<int> others;
            for (int k = 0; k < m; ++k)
                if (k != i && k != j) others.push_back(k);
            const std::uint64_t subsets = std::uint64_t{1} << others.size();
            for (std::uint64_t mask = 0; mask < subsets; ++mask) {
                SeparationQuery qd{observed[i], observed[j], VertexSet(n)};
                SeparationQuery qm{i, j, VertexSet(m)};
                std::vector<int> cond;
                for (std::size_t k = 0; k < others.size(); ++k)
                    if (mask >> k & 1U) {
                        qd.cond.set(observed[others[k]]);
                        qm.cond.set(others[k]);
                        cond.push_back(observed[others[k]]);
                    }
                const bool a = dsep.separated(qd);
                const bool b = msep.separated(qm);
                if (a != b) out.push_back({observed[i], observed[j], std::move(cond), a, b});
            }
        }
    return out;
}

AgreementStats compare_admgs(const Admg& a, const Admg& b) {
    if (a.size() != b.size()) throw VertexMismatch("graphs have different vertex counts");
    AgreementStats s;
    for (int u = 0; u < a.size(); ++u)
        for (int v = u + 1; v < a.size(); ++v) {
            ++s.pairs;
            const int ma = mark(a, u, v);
            const int mb = mark(b, u, v);
            if ((ma != 0) == (mb != 0)) ++s.adjacency_agree;
            if (ma != 0 && mb != 0) {
                ++s.adjacent_in_both;
                if (ma == mb) ++s.orientation_agree;
            }
        }
    s.identical = a == b;
    return s;
}

}  // namespace latentbench

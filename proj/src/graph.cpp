#include "latentbench/graph.hpp"

#include "latentbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>

namespace latentbench {

namespace {

// Kahn's algorithm with a min-heap so ties resolve to the lowest index.
std::vector<int> kahn(int n, const std::vector<std::vector<int>>& children,
                      const std::vector<std::vector<int>>& parents) {
    std::vector<int> indegree(n);
    for (int v = 0; v < n; ++v) indegree[v] = static_cast<int>(parents[v].size());
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.push(v);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : children[v])
            if (--indegree[c] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != n)
        throw CycleDetected("graph has a directed cycle through " +
                            std::to_string(n - static_cast<int>(order.size())) + " vertices");
    return order;
}

void adjacency_from_matrix(const Matrix& w, std::vector<std::vector<int>>& parents,
                           std::vector<std::vector<int>>& children) {
    const int n = static_cast<int>(w.rows());
    parents.assign(n, {});
    children.assign(n, {});
    for (int head = 0; head < n; ++head)
        for (int tail = 0; tail < n; ++tail)
            if (w(head, tail) != 0.0) {
                parents[head].push_back(tail);
                children[tail].push_back(head);
            }
}

VertexSet closure(int n, int start, const std::vector<std::vector<int>>& step) {
    VertexSet seen(n);
    std::vector<int> stack(step[start].begin(), step[start].end());
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (seen.test(v)) continue;
        seen.set(v);
        for (int u : step[v])
            if (!seen.test(u)) stack.push_back(u);
    }
    return seen;
}

}  // namespace

VertexSet make_set(int n, std::initializer_list<int> m) {
    VertexSet s(n);
    for (int v : m) s.set(v);
    return s;
}

VertexSet make_set(int n, const std::vector<int>& m) {
    VertexSet s(n);
    for (int v : m) s.set(v);
    return s;
}

std::vector<int> members(const VertexSet& set) {
    std::vector<int> out;
    for (auto i = set.find_first(); i != VertexSet::npos; i = set.find_next(i))
        out.push_back(static_cast<int>(i));
    return out;
}

// ---------------------------------------------------------------------------
// Dag

Dag::Dag(Matrix weights, std::vector<VertexLabel> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
    if (weights_.rows() != weights_.cols())
        throw InvariantViolation("weight matrix must be square");
    const int n = size();
    if (labels_.empty()) labels_.resize(n);
    if (static_cast<int>(labels_.size()) != n)
        throw InvariantViolation("label count does not match vertex count");
    for (int v = 0; v < n; ++v) {
        if (weights_(v, v) != 0.0)
            throw InvariantViolation("self-loop at vertex " + std::to_string(v));
        for (int u = 0; u < n; ++u)
            if (!std::isfinite(weights_(v, u)))
                throw InvariantViolation("non-finite edge weight");
    }
    adjacency_from_matrix(weights_, parents_, children_);
    order_ = kahn(n, children_, parents_);
}

Dag Dag::from_edges(int n, const std::vector<Edge>& edges, double weight,
                    std::vector<VertexLabel> labels) {
    Matrix w = Matrix::Zero(n, n);
    for (const auto& e : edges) {
        if (e.tail < 0 || e.head < 0 || e.tail >= n || e.head >= n)
            throw InvariantViolation("edge endpoint out of range");
        w(e.head, e.tail) = weight;
    }
    return Dag(std::move(w), std::move(labels));
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    for (int tail = 0; tail < size(); ++tail)
        for (int head : children_[tail]) out.push_back({tail, head});
    return out;
}

std::size_t Dag::edge_count() const {
    std::size_t count = 0;
    for (const auto& c : children_) count += c.size();
    return count;
}

VertexSet Dag::hidden_set() const {
    VertexSet s(size());
    for (int v = 0; v < size(); ++v)
        if (labels_[v].hidden) s.set(v);
    return s;
}

Dag Dag::with_hidden(const VertexSet& hidden) const {
    auto labels = labels_;
    for (int v = 0; v < size(); ++v) labels[v].hidden = hidden.test(v);
    return Dag(weights_, std::move(labels));
}

// ---------------------------------------------------------------------------
// Admg

Admg::Admg(int n, std::vector<Edge> directed, std::vector<UEdge> bidirected)
    : n_(n), directed_(std::move(directed)), bidirected_(std::move(bidirected)) {
    if (n_ < 0) throw InvariantViolation("negative vertex count");
    auto in_range = [n](int v) { return v >= 0 && v < n; };
    for (const auto& e : directed_) {
        if (!in_range(e.tail) || !in_range(e.head))
            throw InvariantViolation("directed edge endpoint out of range");
        if (e.tail == e.head) throw InvariantViolation("directed self-edge");
    }
    for (auto& e : bidirected_) {
        e = UEdge(e.first, e.second);
        if (!in_range(e.first) || !in_range(e.second))
            throw InvariantViolation("bidirected edge endpoint out of range");
        if (e.first == e.second) throw InvariantViolation("bidirected self-edge");
    }
    std::sort(directed_.begin(), directed_.end());
    directed_.erase(std::unique(directed_.begin(), directed_.end()), directed_.end());
    std::sort(bidirected_.begin(), bidirected_.end());
    bidirected_.erase(std::unique(bidirected_.begin(), bidirected_.end()), bidirected_.end());

    for (const auto& e : directed_)
        if (std::binary_search(bidirected_.begin(), bidirected_.end(), UEdge(e.tail, e.head)))
            throw InvariantViolation("bow between " + std::to_string(e.tail) + " and " +
                                     std::to_string(e.head));

    parents_.assign(n_, {});
    children_.assign(n_, {});
    siblings_.assign(n_, {});
    for (const auto& e : directed_) {
        children_[e.tail].push_back(e.head);
        parents_[e.head].push_back(e.tail);
    }
    for (const auto& e : bidirected_) {
        siblings_[e.first].push_back(e.second);
        siblings_[e.second].push_back(e.first);
    }
    for (auto& p : parents_) std::sort(p.begin(), p.end());
    for (auto& s : siblings_) std::sort(s.begin(), s.end());
    kahn(n_, children_, parents_);
}

Admg Admg::from_dag(const Dag& dag) { return Admg(dag.size(), dag.edges(), {}); }

bool Admg::has_directed(int tail, int head) const {
    return std::binary_search(directed_.begin(), directed_.end(), Edge{tail, head});
}

bool Admg::has_bidirected(int u, int v) const {
    return u != v && std::binary_search(bidirected_.begin(), bidirected_.end(), UEdge(u, v));
}

bool Admg::adjacent(int u, int v) const {
    return has_directed(u, v) || has_directed(v, u) || has_bidirected(u, v);
}

// ---------------------------------------------------------------------------
// Free functions

std::vector<int> topological_order(const Matrix& weights) {
    if (weights.rows() != weights.cols()) throw InvariantViolation("weight matrix must be square");
    std::vector<std::vector<int>> parents, children;
    adjacency_from_matrix(weights, parents, children);
    return kahn(static_cast<int>(weights.rows()), children, parents);
}

std::vector<int> topological_order(const Dag& dag) { return dag.topological_order(); }

VertexSet ancestors(const Dag& dag, int v) {
    std::vector<std::vector<int>> parents(dag.size());
    for (int u = 0; u < dag.size(); ++u) parents[u] = dag.parents(u);
    return closure(dag.size(), v, parents);
}

VertexSet descendants(const Dag& dag, int v) {
    std::vector<std::vector<int>> children(dag.size());
    for (int u = 0; u < dag.size(); ++u) children[u] = dag.children(u);
    return closure(dag.size(), v, children);
}

VertexSet ancestors(const Admg& g, int v) {
    std::vector<std::vector<int>> parents(g.size());
    for (int u = 0; u < g.size(); ++u) parents[u] = g.parents(u);
    return closure(g.size(), v, parents);
}

Separator::Separator(const Dag& dag) : n_(dag.size()), incidence_(n_), parents_(n_) {
    for (int v = 0; v < n_; ++v) {
        parents_[v] = dag.parents(v);
        for (int c : dag.children(v)) {
            incidence_[v].push_back({c, false, true});
            incidence_[c].push_back({v, true, false});
        }
    }
}

Separator::Separator(const Admg& g) : n_(g.size()), incidence_(n_), parents_(n_) {
    for (int v = 0; v < n_; ++v) parents_[v] = g.parents(v);
    for (const auto& e : g.directed()) {
        incidence_[e.tail].push_back({e.head, false, true});
        incidence_[e.head].push_back({e.tail, true, false});
    }
    for (const auto& e : g.bidirected()) {
        incidence_[e.first].push_back({e.second, true, true});
        incidence_[e.second].push_back({e.first, true, true});
    }
}

// Active-walk search. A walk arriving at v with an arrowhead continues through
// v as a collider only if v is in cond or has a descendant there; otherwise it
// continues only if v is not conditioned on. Active walks exist exactly when
// active paths do.
bool Separator::separated(const SeparationQuery& q) const {
    const int n = n_;
    if (q.x == q.y) throw InvariantViolation("separation query needs x != y");
    if (q.x < 0 || q.y < 0 || q.x >= n || q.y >= n)
        throw InvariantViolation("separation query vertex out of range");
    if (static_cast<int>(q.cond.size()) != n)
        throw InvariantViolation("conditioning set has wrong universe size");
    if (q.cond.test(q.x) || q.cond.test(q.y))
        throw InvariantViolation("separation query endpoints must lie outside cond");

    std::vector<char> opens_collider(n, 0);
    std::vector<int> stack;
    for (auto v = q.cond.find_first(); v != VertexSet::npos; v = q.cond.find_next(v))
        stack.push_back(static_cast<int>(v));
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (opens_collider[v]) continue;
        opens_collider[v] = 1;
        for (int p : parents_[v]) stack.push_back(p);
    }

    std::vector<char> visited(2 * static_cast<std::size_t>(n), 0);
    std::vector<std::pair<int, bool>> frontier;
    for (const auto& e : incidence_[q.x]) frontier.emplace_back(e.other, e.head_there);
    while (!frontier.empty()) {
        auto [v, arrived_head] = frontier.back();
        frontier.pop_back();
        auto& mark = visited[2 * static_cast<std::size_t>(v) + (arrived_head ? 1 : 0)];
        if (mark) continue;
        mark = 1;
        if (v == q.y) return false;
        for (const auto& e : incidence_[v]) {
            if (e.other == q.x) continue;
            const bool collider = arrived_head && e.head_here;
            const bool passes = collider ? opens_collider[v] != 0 : !q.cond.test(v);
            if (passes) frontier.emplace_back(e.other, e.head_there);
        }
    }
    return true;
}

bool d_separated(const Dag& dag, const SeparationQuery& q) { return Separator(dag).separated(q); }

bool m_separated(const Admg& g, const SeparationQuery& q) { return Separator(g).separated(q); }

AncestralCheck is_ancestral(const Admg& g) {
    std::vector<std::vector<int>> parents(g.size()), children(g.size());
    for (int v = 0; v < g.size(); ++v) {
        parents[v] = g.parents(v);
        children[v] = g.children(v);
    }
    try {
        kahn(g.size(), children, parents);
    } catch (const CycleDetected&) {
        return {false, AncestralViolation::directed_cycle, std::nullopt};
    }
    for (const auto& e : g.bidirected()) {
        if (ancestors(g, e.second).test(e.first) || ancestors(g, e.first).test(e.second))
            return {false, AncestralViolation::almost_directed_cycle, e};
    }
    return {};
}

}  // namespace latentbench

#pragma once

#include <boost/dynamic_bitset.hpp>
#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

namespace latentbench {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using VertexSet = boost::dynamic_bitset<>;

/// Directed edge, tail -> head.
struct Edge {
    int tail = 0;
    int head = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Unordered pair stored with first < second.
struct UEdge {
    int first = 0;
    int second = 0;

    UEdge() = default;
    UEdge(int a, int b) : first(a < b ? a : b), second(a < b ? b : a) {}

    friend bool operator==(const UEdge&, const UEdge&) = default;
    friend auto operator<=>(const UEdge&, const UEdge&) = default;
};

struct VertexLabel {
    int macro_id = 0;
    bool hidden = false;

    friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
};

VertexSet make_set(int n, std::initializer_list<int> members);
VertexSet make_set(int n, const std::vector<int>& members);
std::vector<int> members(const VertexSet& set);

/// Weighted DAG. The weight matrix uses the row-into convention: entry
/// (u, v) is the weight of the edge v -> u, so the parents of u are the
/// nonzero columns of row u. Immutable once built.
class Dag {
public:
    Dag() = default;
    /// Throws InvariantViolation for a non-square matrix, nonzero diagonal or
    /// mismatched labels, and CycleDetected when the support has a cycle.
    explicit Dag(Matrix weights, std::vector<VertexLabel> labels = {});

    static Dag from_edges(int n, const std::vector<Edge>& edges, double weight = 1.0,
                          std::vector<VertexLabel> labels = {});

    int size() const { return static_cast<int>(weights_.rows()); }
    const Matrix& weights() const { return weights_; }
    double weight(int tail, int head) const { return weights_(head, tail); }
    bool has_edge(int tail, int head) const { return weights_(head, tail) != 0.0; }

    const std::vector<int>& parents(int v) const { return parents_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }
    /// Edges sorted by (tail, head).
    std::vector<Edge> edges() const;
    std::size_t edge_count() const;

    const std::vector<VertexLabel>& labels() const { return labels_; }
    VertexSet hidden_set() const;
    const std::vector<int>& topological_order() const { return order_; }

    Dag with_weights(Matrix weights) const { return Dag(std::move(weights), labels_); }
    Dag with_labels(std::vector<VertexLabel> labels) const { return Dag(weights_, std::move(labels)); }
    Dag with_hidden(const VertexSet& hidden) const;

    friend bool operator==(const Dag& a, const Dag& b) {
        return a.weights_ == b.weights_ && a.labels_ == b.labels_;
    }

private:
    Matrix weights_;
    std::vector<VertexLabel> labels_;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
    std::vector<int> order_;
};

/// Acyclic directed mixed graph with directed and bidirected edges.
class Admg {
public:
    Admg() = default;
    /// Throws InvariantViolation on self-edges, bows (u -> v together with
    /// u <-> v) or out-of-range vertices, and CycleDetected when the directed
    /// part is cyclic. Duplicate edges collapse.
    Admg(int n, std::vector<Edge> directed, std::vector<UEdge> bidirected = {});

    static Admg from_dag(const Dag& dag);

    int size() const { return n_; }
    const std::vector<Edge>& directed() const { return directed_; }
    const std::vector<UEdge>& bidirected() const { return bidirected_; }

    bool has_directed(int tail, int head) const;
    bool has_bidirected(int u, int v) const;
    bool adjacent(int u, int v) const;

    const std::vector<int>& parents(int v) const { return parents_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }
    const std::vector<int>& siblings(int v) const { return siblings_[v]; }

    friend bool operator==(const Admg& a, const Admg& b) {
        return a.n_ == b.n_ && a.directed_ == b.directed_ && a.bidirected_ == b.bidirected_;
    }

private:
    int n_ = 0;
    std::vector<Edge> directed_;
    std::vector<UEdge> bidirected_;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
    std::vector<std::vector<int>> siblings_;
};

struct SeparationQuery {
    int x = 0;
    int y = 0;
    VertexSet cond;
};

/// Lowest-index-first Kahn order of the support of a row-into matrix.
/// Throws CycleDetected.
std::vector<int> topological_order(const Matrix& weights);
std::vector<int> topological_order(const Dag& dag);

VertexSet ancestors(const Dag& dag, int v);
VertexSet descendants(const Dag& dag, int v);
VertexSet ancestors(const Admg& g, int v);

/// Reusable separation engine over a fixed graph. d-separation for a Dag,
/// m-separation for an Admg (bidirected edges carry arrowheads at both ends).
class Separator {
public:
    explicit Separator(const Dag& dag);
    explicit Separator(const Admg& g);

    int size() const { return n_; }
    /// Throws InvariantViolation when x == y, either endpoint is in cond, or
    /// the set has the wrong universe.
    bool separated(const SeparationQuery& q) const;

private:
    struct Incidence {
        int other;
        bool head_here;
        bool head_there;
    };

    int n_ = 0;
    std::vector<std::vector<Incidence>> incidence_;
    std::vector<std::vector<int>> parents_;
};

/// Exact d-separation by reachability over (vertex, arrival mark) states.
bool d_separated(const Dag& dag, const SeparationQuery& q);
/// m-separation; bidirected edges carry arrowheads at both ends.
bool m_separated(const Admg& g, const SeparationQuery& q);

enum class AncestralViolation { none, directed_cycle, almost_directed_cycle };

struct AncestralCheck {
    bool ancestral = true;
    AncestralViolation violation = AncestralViolation::none;
    /// Offending sibling pair for an almost-directed cycle.
    std::optional<UEdge> witness;
};

AncestralCheck is_ancestral(const Admg& g);

}  // namespace latentbench

#include "latentbench/param.hpp"

#include "latentbench/errors.hpp"
#include "latentbench/hier_gen.hpp"
#include "latentbench/linalg.hpp"

#include <cmath>

namespace latentbench {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void check_magnitudes(double low, double high, double neg_prob) {
    if (!(low >= 0.0 && low <= high)) throw InvalidRange("need 0 <= low <= high");
    if (!is_probability(neg_prob)) throw InvalidRange("sign probability must lie in [0,1]");
}

double signed_uniform(double low, double high, double neg_prob, Rng& rng) {
    std::uniform_real_distribution<double> mag(low, high);
    std::bernoulli_distribution negative(neg_prob);
    const double w = mag(rng);
    return negative(rng) ? -w : w;
}

}  // namespace

void ImplicitModel::validate() const {
    if (W.rows() != W.cols() || Omega.rows() != Omega.cols() || W.rows() != Omega.rows())
        throw InvariantViolation("W and Omega must be square of equal size");
    if (!is_symmetric(Omega, 0.0)) throw InvariantViolation("Omega must be symmetric");
    topological_order(W);  // a self-loop is a cycle too
    if (size() > 0 && !is_positive_definite(Omega))
        throw NotPositiveDefinite("Omega is not positive definite");
}

void ExplicitModel::validate() const {
    const int no = observed();
    if (W_o.cols() != no || Lambda.rows() != no || eps_var.size() != no || xi_var.size() != latent())
        throw InvariantViolation("explicit model blocks have inconsistent shapes");
    static_cast<void>(Dag(W_o));  // throws on a cycle
    for (int u = 0; u < latent(); ++u) {
        if ((Lambda.col(u).array() != 0.0).count() < 2)
            throw InvariantViolation("latent " + std::to_string(u) + " loads on fewer than two observables");
        if (!(xi_var(u) > 0.0)) throw InvariantViolation("Var(xi) must be positive");
    }
    for (int v = 0; v < no; ++v)
        if (!(eps_var(v) > 0.0)) throw InvariantViolation("Var(eps) must be positive");
}

Dag sample_weights_uniform(const Dag& mask, double low, double high, double neg_prob, Rng& rng) {
    check_magnitudes(low, high, neg_prob);
    Matrix w = Matrix::Zero(mask.size(), mask.size());
    for (const auto& e : mask.edges()) w(e.head, e.tail) = signed_uniform(low, high, neg_prob, rng);
    return mask.with_weights(std::move(w));
}

Matrix sample_wishart_matrix(int dim, double dof, double scale, Rng& rng) {
    if (dim < 1) throw InvalidRange("Wishart dimension must be >= 1");
    if (!(dof > dim - 1)) throw InvalidRange("Wishart degrees of freedom must exceed dim - 1");
    if (!(scale > 0.0)) throw InvalidRange("Wishart scale must be positive");
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix a = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        std::chi_squared_distribution<double> chi2(dof - i);
        a(i, i) = std::sqrt(chi2(rng));
        for (int j = 0; j < i; ++j) a(i, j) = normal(rng);
    }
    return scale * a * a.transpose();
}

Dag sample_weights_wishart(const Dag& mask, int n_vertices, double scale_identity, double flip_prob,
                           Rng& rng) {
    if (n_vertices < mask.size()) throw InvalidRange("Wishart dimension smaller than the graph");
    if (!is_probability(flip_prob)) throw InvalidRange("flip probability must lie in [0,1]");
    const Matrix m = sample_wishart_matrix(n_vertices, n_vertices + 1.0, scale_identity, rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix w = Matrix::Zero(mask.size(), mask.size());
    for (const auto& e : mask.edges()) {
        const double u = unit(rng);
        w(e.head, e.tail) = u < flip_prob ? -m(e.head, e.tail) : m(e.head, e.tail);
    }
    return mask.with_weights(std::move(w));
}

Matrix sample_symmetric_offdiag(int n, double density, double low, double high, double neg_prob,
                                Rng& rng) {
    if (n < 0) throw InvalidRange("negative dimension");
    if (!is_probability(density)) throw InvalidRange("density must lie in [0,1]");
    check_magnitudes(low, high, neg_prob);
    std::bernoulli_distribution present(density);
    Matrix m = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (present(rng)) m(i, j) = m(j, i) = signed_uniform(low, high, neg_prob, rng);
    return m;
}

Matrix build_omega_diag_dominant(const Matrix& off_diag) {
    if (off_diag.rows() != off_diag.cols()) throw InvariantViolation("off-diagonal pattern must be square");
    if (!is_symmetric(off_diag, 0.0)) throw InvariantViolation("off-diagonal pattern must be symmetric");
    if (off_diag.rows() > 0 && off_diag.diagonal().cwiseAbs().maxCoeff() != 0.0)
        throw InvariantViolation("off-diagonal pattern must have a zero diagonal");
    Matrix omega = off_diag;
    for (int i = 0; i < omega.rows(); ++i) {
        double off = 0.0;
        for (int j = 0; j < omega.cols(); ++j)
            if (j != i) off += std::abs(off_diag(i, j));
        omega(i, i) = 1.0 + off;
    }
    return omega;
}

ImplicitModel explicit_to_implicit(const ExplicitModel& m) {
    m.validate();
    Matrix omega = m.Lambda * m.xi_var.asDiagonal() * m.Lambda.transpose();
    omega.diagonal() += m.eps_var;
    return {m.W_o, symmetrize(omega)};
}

Dag explicit_block_adjacency(const ExplicitModel& m) {
    m.validate();
    const int no = m.observed();
    const int nu = m.latent();
    Matrix w = Matrix::Zero(no + nu, no + nu);
    w.topLeftCorner(no, no) = m.W_o;
    w.topRightCorner(no, nu) = m.Lambda;
    std::vector<VertexLabel> labels(no + nu);
    for (int u = 0; u < nu; ++u) labels[no + u].hidden = true;
    return Dag(std::move(w), std::move(labels));
}

JointSpaceLabel classify_joint_space(const ImplicitModel& m) {
    JointSpaceLabel out;
    const int n = m.size();
    bool off_diagonal = false;
    for (int i = 0; i < n && !off_diagonal; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && m.Omega(i, j) != 0.0 && m.Omega(j, i) == m.Omega(i, j)) {
                off_diagonal = true;
                break;
            }
    out.in_C_B = off_diagonal && is_symmetric(m.Omega, 0.0) && is_positive_definite(m.Omega);
    if (!out.in_C_B) return out;

    Dag dag;
    try {
        dag = Dag(m.W);
    } catch (const CycleDetected&) {
        return out;
    }
    out.in_S_B = true;

    std::vector<VertexSet> anc(n);
    for (int v = 0; v < n; ++v) anc[v] = ancestors(dag, v);
    out.in_A_B = true;
    for (int i = 0; i < n && out.in_A_B; ++i)
        for (int j = i + 1; j < n; ++j)
            if (m.Omega(i, j) != 0.0 && (anc[j].test(i) || anc[i].test(j))) {
                out.in_A_B = false;
                break;
            }
    return out;
}

HiddenSplit split_hidden_roots(const Dag& dag, const VertexSet& hidden, const Vector& variances) {
    const int n = dag.size();
    if (static_cast<int>(hidden.size()) != n || variances.size() != n)
        throw InvariantViolation("hidden set and variances must cover every vertex");
    HiddenSplit out;
    for (int v = 0; v < n; ++v) (hidden.test(v) ? out.hidden : out.observed).push_back(v);
    for (int h : out.hidden)
        if (!dag.parents(h).empty()) throw HiddenNotRoot(h);

    const int no = static_cast<int>(out.observed.size());
    const int nu = static_cast<int>(out.hidden.size());
    const Matrix& w = dag.weights();
    auto& m = out.model;
    m.W_o = submatrix(w, out.observed, out.observed);
    m.Lambda = submatrix(w, out.observed, out.hidden);
    m.xi_var.resize(nu);
    m.eps_var.resize(no);
    for (int u = 0; u < nu; ++u) m.xi_var(u) = variances(out.hidden[u]);
    for (int v = 0; v < no; ++v) m.eps_var(v) = variances(out.observed[v]);
    return out;
}

ImplicitModel implicit_from_hidden(const Dag& dag, const VertexSet& hidden, const Vector& variances) {
    const auto split = split_hidden_roots(dag, hidden, variances);
    const auto& m = split.model;
    for (int u = 0; u < m.latent(); ++u)
        if (!(m.xi_var(u) > 0.0)) throw InvariantViolation("Var(xi) must be positive");
    for (int v = 0; v < m.observed(); ++v)
        if (!(m.eps_var(v) > 0.0)) throw InvariantViolation("Var(eps) must be positive");
    Matrix omega = m.Lambda * m.xi_var.asDiagonal() * m.Lambda.transpose();
    omega.diagonal() += m.eps_var;
    return {m.W_o, symmetrize(omega)};
}

ExplicitModel random_explicit_model(int n_o, int n_u, const ExplicitEnsembleSpec& spec, Rng& rng) {
    if (n_o < 2 || n_u < 0) throw InvalidRange("need at least two observables");
    ExplicitModel m;
    m.W_o = sample_weights_uniform(random_dag(n_o, spec.edge_prob, rng), spec.weight_low,
                                   spec.weight_high, 0.5, rng)
                .weights();
    m.Lambda = Matrix::Zero(n_o, n_u);
    std::uniform_int_distribution<int> width(2, n_o);
    for (int u = 0; u < n_u; ++u) {
        std::vector<int> rows(n_o);
        for (int v = 0; v < n_o; ++v) rows[v] = v;
        std::shuffle(rows.begin(), rows.end(), rng);
        const int k = width(rng);
        for (int r = 0; r < k; ++r)
            m.Lambda(rows[r], u) = signed_uniform(spec.loading_low, spec.loading_high, 0.5, rng);
    }
    std::uniform_real_distribution<double> var(spec.var_low, spec.var_high);
    m.xi_var.resize(n_u);
    m.eps_var.resize(n_o);
    for (int u = 0; u < n_u; ++u) m.xi_var(u) = var(rng);
    for (int v = 0; v < n_o; ++v) m.eps_var(v) = var(rng);
    return m;
}

ImplicitModel random_dominant_model(int n, const DominantEnsembleSpec& spec, Rng& rng) {
    const Dag mask = random_dag(n, spec.edge_prob, rng);
    const Dag weighted = sample_weights_uniform(mask, 0.0, spec.weight_max, spec.neg_prob, rng);
    const Matrix off = sample_symmetric_offdiag(n, spec.omega_density, 0.0, spec.omega_max, spec.neg_prob, rng);
    return {weighted.weights(), build_omega_diag_dominant(off)};
}

}  // namespace latentbench

#pragma once

#include "latentbench/graph.hpp"
#include "latentbench/rng.hpp"

#include <vector>

namespace latentbench {

/// Implicit confounding: adjacency W plus a full idiosyncratic covariance.
struct ImplicitModel {
    Matrix W;
    Matrix Omega;

    int size() const { return static_cast<int>(W.rows()); }
    /// Throws InvariantViolation (shape, asymmetry), CycleDetected, or
    /// NotPositiveDefinite.
    void validate() const;
};

/// Explicit confounding: observed adjacency, loadings of each latent source on
/// the observables, and independent noise variances.
struct ExplicitModel {
    Matrix W_o;
    Matrix Lambda;
    Vector xi_var;
    Vector eps_var;

    int observed() const { return static_cast<int>(W_o.rows()); }
    int latent() const { return static_cast<int>(Lambda.cols()); }
    /// Throws InvariantViolation when a loading column has fewer than two
    /// nonzeros, a variance is not positive or shapes disagree; CycleDetected
    /// for a cyclic W_o.
    void validate() const;
};

struct JointSpaceLabel {
    bool in_C_B = false;
    bool in_S_B = false;
    bool in_A_B = false;
};

/// |w| ~ U[low, high] and negative sign with probability neg_prob, drawn per
/// edge in (tail, head) order. The mask's existing weights are ignored.
/// Throws InvalidRange unless 0 <= low <= high and neg_prob is a probability.
Dag sample_weights_uniform(const Dag& mask, double low, double high, double neg_prob, Rng& rng);

/// Wishart(scale * I, dof) draw of dimension `dim` by the Bartlett
/// construction.
Matrix sample_wishart_matrix(int dim, double dof, double scale, Rng& rng);

/// One Wishart matrix M with |V| + 1 degrees of freedom; edge tail -> head
/// takes M(head, tail) and then flips sign when a uniform draw falls below
/// flip_prob. A uniform is consumed for every edge whatever flip_prob is.
Dag sample_weights_wishart(const Dag& mask, int n_vertices, double scale_identity, double flip_prob,
                           Rng& rng);

/// Symmetric matrix with zero diagonal. Each pair i < j is nonzero with
/// probability `density`; magnitudes U[low, high], negative with neg_prob.
Matrix sample_symmetric_offdiag(int n, double density, double low, double high, double neg_prob,
                                Rng& rng);

/// Completes the off-diagonals so every row has dominance margin exactly 1.
Matrix build_omega_diag_dominant(const Matrix& off_diag);

ImplicitModel explicit_to_implicit(const ExplicitModel& m);

/// W' = [[W_o, Lambda], [0, 0]]; the latent vertices come last and are
/// labelled hidden.
Dag explicit_block_adjacency(const ExplicitModel& m);

/// Membership of the cone of PD matrices with a nonzero off-diagonal, the
/// acyclic joint space, and its ancestral restriction. Ancestral relations are
/// read from the structural transitive closure of W.
JointSpaceLabel classify_joint_space(const ImplicitModel& m);

struct HiddenSplit {
    std::vector<int> observed;
    std::vector<int> hidden;
    /// Loading columns are not required to hit two observables here.
    ExplicitModel model;
};

/// Slices a DAG whose hidden vertices are sources into explicit blocks.
/// `variances` is indexed by DAG vertex: hidden entries are Var(xi), observed
/// entries Var(eps). Throws HiddenNotRoot.
HiddenSplit split_hidden_roots(const Dag& dag, const VertexSet& hidden, const Vector& variances);

ImplicitModel implicit_from_hidden(const Dag& dag, const VertexSet& hidden, const Vector& variances);

struct ExplicitEnsembleSpec {
    double edge_prob = 0.3;
    double weight_low = 0.1;
    double weight_high = 0.5;
    double loading_low = 0.1;
    double loading_high = 1.5;
    double var_low = 0.5;
    double var_high = 2.0;
};

/// Random explicit model; every loading column touches at least two of the
/// n_o >= 2 observables.
ExplicitModel random_explicit_model(int n_o, int n_u, const ExplicitEnsembleSpec& spec, Rng& rng);

struct DominantEnsembleSpec {
    double edge_prob = 0.3;
    double weight_max = 0.5;
    double omega_density = 0.3;
    double omega_max = 0.5;
    double neg_prob = 0.5;
};

/// Random DAG with weights in [-weight_max, weight_max] and a diagonally
/// dominant Omega from build_omega_diag_dominant.
ImplicitModel random_dominant_model(int n, const DominantEnsembleSpec& spec, Rng& rng);

}  // namespace latentbench

#pragma once

#include "latentbench/graph.hpp"
#include "latentbench/param.hpp"
#include "latentbench/rng.hpp"

#include <optional>
#include <vector>

namespace latentbench {

inline constexpr double kTransformTol = 1e-10;

/// Ordered, disjoint index sets covering 0..n-1. Every block matrix in this
/// module is laid out observed-first in this order.
struct BlockPartition {
    std::vector<int> observed;
    std::vector<int> hidden;

    int size() const { return static_cast<int>(observed.size() + hidden.size()); }
    /// Throws InvariantViolation unless the sets partition 0..n-1.
    void validate(int n) const;
    /// Permutation observed ++ hidden.
    std::vector<int> order() const;
};

/// Rows and columns reordered to the partition's block order.
Matrix to_block_order(const Matrix& m, const BlockPartition& part);

struct CongruentPair {
    Matrix Q;
    Matrix Sigma_out;
};

/// Sigma_out = Q^T Sigma Q. Throws SingularBlock for a singular Q.
CongruentPair congruent(const Matrix& sigma, const Matrix& q);

/// Q = [[I, S11^-1 S12], [0, I]] with Sigma in block order. Congruence by
/// Q^-1 block-diagonalizes Sigma. Throws SingularBlock when S11 is not PD.
Matrix schur_q(const Matrix& sigma, const BlockPartition& part);

/// Joint covariance of (Y_O, xi), observed first. Loading columns are not
/// checked, so degenerate models can be used for algebra checks.
Matrix joint_covariance(const ExplicitModel& m);

struct SimilarAdjacency {
    Matrix Q;
    /// The similarity itself.
    Matrix W;
    /// Block form with a zero latent row band, as usually displayed.
    Matrix printed;
    /// max |printed - W|; zero only in degenerate cases.
    double printed_residual = 0.0;
    /// max |W - T W' T^-1| for the defining T.
    double similarity_residual = 0.0;
    /// Observed-latent block of the transformed covariance.
    Matrix cross_covariance;
};

/// W''_2 = Q^-T W' Q^T. The transformed variables are (Y_O, xi - K Y_O)
/// with K = S21 S11^-1, so their cross-covariance vanishes.
/// sigma_prime is the joint covariance in (Y_O, xi) order.
SimilarAdjacency similar_adjacency_w2(const ExplicitModel& m, const Matrix& sigma_prime);

/// W''_1 = Q^T W' Q^-T.
SimilarAdjacency similar_adjacency_w1(const ExplicitModel& m, const Matrix& sigma_prime);

/// Q^T eps_cov Q is diagonal within tolerance.
bool idio_diagonality_check(const Matrix& q, const Matrix& eps_cov, double tol = kTransformTol);

/// Q with Q11 = I, Q21 = (S - I) S21 and the free blocks Q12 (default 0),
/// Q22 (default I). Throws HypothesisViolated unless S22 = I and S is
/// orthonormal, both within kTransformTol.
Matrix q21_family(const Matrix& sigma, const BlockPartition& part, const Matrix& s,
                  const std::optional<Matrix>& q12 = std::nullopt,
                  const std::optional<Matrix>& q22 = std::nullopt);

/// Haar-distributed orthogonal matrix from a sign-corrected QR.
Matrix random_orthonormal(int n, Rng& rng);

}  // namespace latentbench

#include "latentbench/transforms.hpp"

#include "latentbench/covariance.hpp"
#include "latentbench/errors.hpp"
#include "latentbench/linalg.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>

namespace latentbench {

namespace {

struct Blocks {
    Matrix s11, s12, s21, s22;
};

Blocks split(const Matrix& m, int k) {
    const int r = static_cast<int>(m.rows()) - k;
    return {m.topLeftCorner(k, k), m.topRightCorner(k, r), m.bottomLeftCorner(r, k), m.bottomRightCorner(r, r)};
}

Matrix solve_s11(const Matrix& s11, const Matrix& rhs) {
    Eigen::LLT<Matrix> llt(s11);
    if (s11.rows() > 0 && (llt.info() != Eigen::Success || !is_positive_definite(s11)))
        throw SingularBlock("top-left covariance block is not positive definite");
    return s11.rows() > 0 ? Matrix(llt.solve(rhs)) : Matrix::Zero(0, rhs.cols());
}

Matrix block_adjacency_unchecked(const ExplicitModel& m) {
    const int no = m.observed();
    const int nu = m.latent();
    Matrix w = Matrix::Zero(no + nu, no + nu);
    w.topLeftCorner(no, no) = m.W_o;
    w.topRightCorner(no, nu) = m.Lambda;
    return w;
}

// Q from the Schur construction together with K = S21 S11^-1.
std::pair<Matrix, Matrix> schur_parts(const Matrix& sigma_prime, int no) {
    const auto b = split(sigma_prime, no);
    const Matrix k = solve_s11(b.s11, b.s12).transpose();
    const int n = static_cast<int>(sigma_prime.rows());
    Matrix q = Matrix::Identity(n, n);
    q.topRightCorner(no, n - no) = k.transpose();
    return {q, k};
}

void check_shapes(const ExplicitModel& m, const Matrix& sigma_prime) {
    const int n = m.observed() + m.latent();
    if (m.W_o.rows() != m.W_o.cols() || m.Lambda.rows() != m.observed() || sigma_prime.rows() != n ||
        sigma_prime.cols() != n)
        throw InvariantViolation("explicit model and joint covariance shapes disagree");
}

}  // namespace

void BlockPartition::validate(int n) const {
    std::vector<int> all = order();
    std::sort(all.begin(), all.end());
    bool ok = static_cast<int>(all.size()) == n;
    for (int i = 0; ok && i < n; ++i) ok = all[i] == i;
    if (!ok) throw InvariantViolation("block partition does not cover 0..n-1 exactly once");
}

std::vector<int> BlockPartition::order() const {
    std::vector<int> out = observed;
    out.insert(out.end(), hidden.begin(), hidden.end());
    return out;
}

Matrix to_block_order(const Matrix& m, const BlockPartition& part) {
    part.validate(static_cast<int>(m.rows()));
    const auto idx = part.order();
    return submatrix(m, idx, idx);
}

CongruentPair congruent(const Matrix& sigma, const Matrix& q) {
    Eigen::FullPivLU<Matrix> lu(q);
    if (!lu.isInvertible()) throw SingularBlock("congruence matrix is singular");
    return {q, q.transpose() * sigma * q};
}

Matrix schur_q(const Matrix& sigma, const BlockPartition& part) {
    return schur_parts(to_block_order(sigma, part), static_cast<int>(part.observed.size())).first;
}

Matrix joint_covariance(const ExplicitModel& m) {
    if (m.Lambda.rows() != m.observed() || m.xi_var.size() != m.latent() || m.eps_var.size() != m.observed())
        throw InvariantViolation("explicit model blocks have inconsistent shapes");
    ImplicitModel block;
    block.W = block_adjacency_unchecked(m);
    Vector var(m.observed() + m.latent());
    var << m.eps_var, m.xi_var;
    block.Omega = var.asDiagonal();
    return sigma_of(block);
}

SimilarAdjacency similar_adjacency_w2(const ExplicitModel& m, const Matrix& sigma_prime) {
    check_shapes(m, sigma_prime);
    const int no = m.observed();
    const int nu = m.latent();
    const auto [q, k] = schur_parts(sigma_prime, no);
    const Matrix wp = block_adjacency_unchecked(m);

    SimilarAdjacency out;
    out.Q = q;
    const Matrix q_inv = q.inverse();
    const Matrix t = q_inv.transpose();
    out.W = t * wp * q.transpose();
    const Matrix b = m.W_o + m.Lambda * k;
    Matrix closed = Matrix::Zero(no + nu, no + nu);
    closed.topLeftCorner(no, no) = b;
    closed.topRightCorner(no, nu) = m.Lambda;
    out.printed = closed;
    closed.bottomLeftCorner(nu, no) = -k * b;
    closed.bottomRightCorner(nu, nu) = -k * m.Lambda;
    out.similarity_residual = max_abs(out.W - closed);
    out.printed_residual = max_abs(out.printed - out.W);
    const Matrix transformed = t * sigma_prime * t.transpose();
    out.cross_covariance = transformed.topRightCorner(no, nu);
    return out;
}

SimilarAdjacency similar_adjacency_w1(const ExplicitModel& m, const Matrix& sigma_prime) {
    check_shapes(m, sigma_prime);
    const int no = m.observed();
    const int nu = m.latent();
    const auto [q, k] = schur_parts(sigma_prime, no);
    const Matrix wp = block_adjacency_unchecked(m);

    SimilarAdjacency out;
    out.Q = q;
    const Matrix q_inv_t = q.inverse().transpose();
    out.W = q.transpose() * wp * q_inv_t;
    const Matrix top = m.W_o - m.Lambda * k;
    Matrix closed = Matrix::Zero(no + nu, no + nu);
    closed.topLeftCorner(no, no) = top;
    closed.topRightCorner(no, nu) = m.Lambda;
    closed.bottomLeftCorner(nu, no) = k * top;
    closed.bottomRightCorner(nu, nu) = k * m.Lambda;
    out.similarity_residual = max_abs(out.W - closed);

    out.printed = Matrix::Zero(no + nu, no + nu);
    out.printed.topLeftCorner(no, no) = m.W_o;
    out.printed.topRightCorner(no, nu) = m.Lambda;
    out.printed.bottomLeftCorner(nu, no) = k * m.W_o;
    out.printed.bottomRightCorner(nu, nu) = k * m.Lambda;
    out.printed_residual = max_abs(out.printed - out.W);
    // Variables Q^T Z: (Y_O, xi + K Y_O).
    const Matrix transformed = q.transpose() * sigma_prime * q;
    out.cross_covariance = transformed.topRightCorner(no, nu);
    return out;
}

bool idio_diagonality_check(const Matrix& q, const Matrix& eps_cov, double tol) {
    Matrix out = q.transpose() * eps_cov * q;
    out.diagonal().setZero();
    return out.size() == 0 || out.cwiseAbs().maxCoeff() <= tol;
}

Matrix q21_family(const Matrix& sigma, const BlockPartition& part, const Matrix& s,
                  const std::optional<Matrix>& q12, const std::optional<Matrix>& q22) {
    const Matrix ordered = to_block_order(sigma, part);
    const int no = static_cast<int>(part.observed.size());
    const int nu = static_cast<int>(part.hidden.size());
    const auto b = split(ordered, no);
    if (nu > 0 && max_abs(b.s22 - Matrix::Identity(nu, nu)) > kTransformTol)
        throw HypothesisViolated("latent covariance block must be the identity");
    if (s.rows() != nu || s.cols() != nu) throw HypothesisViolated("S must be square over the latent block");
    if (nu > 0 && max_abs(s.transpose() * s - Matrix::Identity(nu, nu)) > kTransformTol)
        throw HypothesisViolated("S is not orthonormal");

    Matrix q = Matrix::Identity(no + nu, no + nu);
    q.bottomLeftCorner(nu, no) = (s - Matrix::Identity(nu, nu)) * b.s21;
    if (q12) q.topRightCorner(no, nu) = *q12;
    if (q22) q.bottomRightCorner(nu, nu) = *q22;
    return q;
}

Matrix random_orthonormal(int n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

}  // namespace latentbench

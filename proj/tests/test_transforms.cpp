#include "latentbench/errors.hpp"
#include "latentbench/linalg.hpp"
#include "latentbench/param.hpp"
#include "latentbench/transforms.hpp"

#include <doctest.h>

#include <cmath>

using namespace latentbench;

namespace {

Matrix random_pd(int n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
    return g * g.transpose() + Matrix::Identity(n, n);
}

BlockPartition first_k(int n, int k) {
    BlockPartition p;
    for (int i = 0; i < n; ++i) (i < k ? p.observed : p.hidden).push_back(i);
    return p;
}

// Intermediate variables k -> j with j to the star's leaves: W_o != 0.
ExplicitModel star_with_edges() {
    ExplicitModel m;
    m.W_o = Matrix::Zero(3, 3);
    m.W_o(1, 0) = 0.6;
    m.W_o(2, 1) = -0.4;
    m.Lambda = Matrix(3, 1);
    m.Lambda << 1.0, 0.5, -0.8;
    m.xi_var = Vector::Constant(1, 1.5);
    m.eps_var = Vector::Ones(3);
    return m;
}

// Nilpotent matrices have ill-conditioned eigenvalues, so test the power.
double nilpotency_residual(const Matrix& m) {
    Matrix p = Matrix::Identity(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k) p = p * m;
    return max_abs(p);
}

}  // namespace

TEST_CASE("schur q") {
    Matrix blockdiag = Matrix::Identity(3, 3) * 2.0;
    CHECK(schur_q(blockdiag, first_k(3, 2)) == Matrix::Identity(3, 3));

    const double r = 0.4;
    Matrix s(2, 2);
    s << 1, r, r, 1;
    const auto pair = congruent(s, schur_q(s, first_k(2, 1)).inverse());
    CHECK(pair.Sigma_out(1, 1) == doctest::Approx(1 - r * r).epsilon(1e-14));
    CHECK(std::abs(pair.Sigma_out(0, 1)) <= 1e-15);

    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix sig = random_pd(6, rng);
        const Matrix q = schur_q(sig, first_k(6, 4));
        const auto c = congruent(sig, q.inverse());
        CHECK(max_abs(c.Sigma_out.topRightCorner(4, 2)) <= 1e-10);
        CHECK(max_abs(c.Sigma_out.topLeftCorner(4, 4) - sig.topLeftCorner(4, 4)) <= 1e-10);
        CHECK(max_abs(c.Sigma_out - q.inverse().transpose() * sig * q.inverse()) <= 1e-10);
        CHECK(min_eigenvalue(c.Sigma_out) > 0.0);
    }
    Matrix bad = Matrix::Identity(3, 3);
    bad(0, 0) = 0.0;
    CHECK_THROWS_AS(schur_q(bad, first_k(3, 2)), SingularBlock);
}

TEST_CASE("partition order") {
    BlockPartition p{{2, 0}, {1}};
    Matrix m(3, 3);
    m << 0, 1, 2, 3, 4, 5, 6, 7, 8;
    Matrix expected(3, 3);
    expected << 8, 6, 7, 2, 0, 1, 5, 3, 4;
    CHECK(to_block_order(m, p) == expected);
    CHECK_THROWS_AS(to_block_order(m, BlockPartition{{0, 1}, {1}}), InvariantViolation);
}

TEST_CASE("w2 similarity") {
    ExplicitModel zero;
    zero.W_o = Matrix::Zero(2, 2);
    zero.W_o(1, 0) = 0.3;
    zero.Lambda = Matrix::Zero(2, 1);
    zero.xi_var = Vector::Ones(1);
    zero.eps_var = Vector::Ones(2);
    const auto z = similar_adjacency_w2(zero, joint_covariance(zero));
    Matrix expected = Matrix::Zero(3, 3);
    expected(1, 0) = 0.3;
    CHECK(max_abs(z.W - expected) <= 1e-15);
    CHECK(max_abs(z.printed - expected) <= 1e-15);

    const auto m = star_with_edges();
    const auto r = similar_adjacency_w2(m, joint_covariance(m));
    CHECK(max_abs(r.cross_covariance) <= 1e-10);
    CHECK(r.similarity_residual <= 1e-10);
    CHECK(nilpotency_residual(r.W) <= 1e-8);
    // The version with a zero latent band is a different matrix.
    CHECK(r.printed_residual > 1e-3);
    CHECK(max_abs(r.printed.topRows(3) - r.W.topRows(3)) <= 1e-12);
}

TEST_CASE("w1 similarity") {
    ExplicitModel m = star_with_edges();
    const auto r = similar_adjacency_w1(m, joint_covariance(m));
    CHECK(r.similarity_residual <= 1e-10);
    CHECK(nilpotency_residual(r.W) <= 1e-8);
    const Matrix sig = joint_covariance(m);
    const Matrix k = sig.bottomLeftCorner(1, 3) * sig.topLeftCorner(3, 3).inverse();
    CHECK(max_abs(r.printed.bottomLeftCorner(1, 3) - k * m.W_o) <= 1e-12);
    CHECK(max_abs(r.printed.bottomLeftCorner(1, 3)) > 1e-3);

    // No cross-covariance means Q = I and W''_1 = W'.
    ExplicitModel apart = m;
    apart.Lambda.setZero();
    const auto a = similar_adjacency_w1(apart, joint_covariance(apart));
    Matrix wp = Matrix::Zero(4, 4);
    wp.topLeftCorner(3, 3) = m.W_o;
    CHECK(max_abs(a.W - wp) <= 1e-15);

    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto e = random_explicit_model(2 + trial % 6, 1 + trial % 4, {}, rng);
        const Matrix s = joint_covariance(e);
        const auto w1 = similar_adjacency_w1(e, s);
        const auto w2 = similar_adjacency_w2(e, s);
        CHECK(nilpotency_residual(w1.W) <= 1e-8);
        CHECK(nilpotency_residual(w2.W) <= 1e-8);
        CHECK(max_abs(w2.cross_covariance) <= 1e-10);
        CHECK(w1.similarity_residual <= 1e-10);
        CHECK(w2.similarity_residual <= 1e-10);
    }
}

TEST_CASE("idiosyncratic diagonality") {
    Matrix eps = Matrix::Zero(3, 3);
    eps.diagonal() << 1, 2, 3;
    CHECK(idio_diagonality_check(Vector(Vector::LinSpaced(3, 1, 3)).asDiagonal().toDenseMatrix(), eps));
    Rng rng(7);
    CHECK(idio_diagonality_check(random_orthonormal(3, rng), Matrix::Identity(3, 3)));
    const auto m = star_with_edges();
    const Matrix q = schur_q(joint_covariance(m), first_k(4, 3));
    Matrix e4 = Matrix::Identity(4, 4);
    e4(3, 3) = 1.5;
    CHECK_FALSE(idio_diagonality_check(q, e4));
}

TEST_CASE("q21 family") {
    // Sigma with an identity latent block.
    Matrix s = Matrix::Identity(3, 3) * 2.0;
    s(2, 2) = 1.0;
    s(0, 2) = s(2, 0) = 0.5;
    s(1, 2) = s(2, 1) = -0.3;
    const auto part = first_k(3, 2);

    const Matrix q_id = q21_family(s, part, Matrix::Identity(1, 1));
    CHECK(q_id == Matrix::Identity(3, 3));

    const Matrix q_flip = q21_family(s, part, -Matrix::Identity(1, 1));
    CHECK(q_flip(2, 0) == doctest::Approx(-2 * 0.5));
    CHECK(q_flip(2, 1) == doctest::Approx(-2 * -0.3));
    const auto c = congruent(s, q_flip);
    CHECK(max_abs(c.Sigma_out.topLeftCorner(2, 2) - s.topLeftCorner(2, 2)) <= 1e-10);

    Matrix apart = Matrix::Identity(3, 3);
    Rng rng(19);
    const Matrix rot = random_orthonormal(1, rng);
    CHECK(q21_family(apart, part, rot).bottomLeftCorner(1, 2).isZero(0.0));

    Matrix wrong = s;
    wrong(2, 2) = 1.5;
    CHECK_THROWS_AS(q21_family(wrong, part, Matrix::Identity(1, 1)), HypothesisViolated);
    Matrix stretch = Matrix::Identity(1, 1) * 2.0;
    CHECK_THROWS_AS(q21_family(s, part, stretch), HypothesisViolated);

    for (int trial = 0; trial < 50; ++trial) {
        const int no = 2 + trial % 4;
        const int nu = 1 + trial % 3;
        const int n = no + nu;
        // Build Sigma = [[A, B], [B^T, I]] with A large enough to stay PD.
        Matrix sig = Matrix::Identity(n, n);
        std::uniform_real_distribution<double> u(-0.3, 0.3);
        for (int i = 0; i < no; ++i)
            for (int j = 0; j < nu; ++j) sig(i, no + j) = sig(no + j, i) = u(rng);
        sig.topLeftCorner(no, no) += Matrix::Identity(no, no) * 2.0;
        const Matrix q12 = Matrix::Constant(no, nu, 0.2);
        const Matrix q22 = Matrix::Identity(nu, nu) * 3.0;
        const Matrix q = q21_family(sig, first_k(n, no), random_orthonormal(nu, rng), q12, q22);
        const auto out = congruent(sig, q);
        CHECK(max_abs(out.Sigma_out.topLeftCorner(no, no) - sig.topLeftCorner(no, no)) <= 1e-10);
        CHECK(max_abs(out.Sigma_out - q.transpose() * sig * q) <= 1e-10);
    }
}

TEST_CASE("random orthonormal") {
    Rng rng(23);
    for (int n : {1, 2, 5, 9}) {
        const Matrix q = random_orthonormal(n, rng);
        CHECK(max_abs(q.transpose() * q - Matrix::Identity(n, n)) <= 1e-12);
    }
}

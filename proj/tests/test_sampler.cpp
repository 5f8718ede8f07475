#include "latentbench/covariance.hpp"
#include "latentbench/errors.hpp"
#include "latentbench/hier_gen.hpp"
#include "latentbench/linalg.hpp"
#include "latentbench/sampler.hpp"

#include <doctest.h>

#include <cmath>

using namespace latentbench;

namespace {

Matrix empirical_cov(const Matrix& y) {
    const Matrix c = y.rowwise() - y.colwise().mean();
    return c.transpose() * c / static_cast<double>(y.rows() - 1);
}

}  // namespace

TEST_CASE("noise variance matching") {
    for (auto dist : {NoiseDist::gaussian, NoiseDist::uniform, NoiseDist::laplace}) {
        const NoiseSpec spec{dist, Vector::Constant(2, 2.5)};
        const Matrix eps = draw_noise(spec, 200000, 42);
        const Matrix c = empirical_cov(eps);
        // Var of a sample variance is roughly (kurtosis - 1) var^2 / n; Laplace has kurtosis 6.
        const double se = std::sqrt(5.0) * 2.5 / std::sqrt(200000.0);
        CHECK(std::abs(c(0, 0) - 2.5) <= 5.0 * se);
        CHECK(std::abs(c(1, 1) - 2.5) <= 5.0 * se);
    }
    CHECK_THROWS_AS(parse_noise_dist("cauchy"), ConfigInvalid);
    CHECK_THROWS_AS(draw_noise({NoiseDist::gaussian, Vector::Zero(1)}, 3, 1), InvariantViolation);
}

TEST_CASE("uniform noise stays within its half-width") {
    const Matrix eps = draw_noise({NoiseDist::uniform, Vector::Constant(1, 3.0)}, 10000, 7);
    CHECK(eps.cwiseAbs().maxCoeff() <= 3.0);
}

TEST_CASE("ancestral sampling moments") {
    const Matrix y = ancestral_sample(Dag(Matrix::Zero(3, 3)), {NoiseDist::gaussian, Vector::Ones(3)}, 1000000, 5);
    const Matrix c = empirical_cov(y);
    for (int v = 0; v < 3; ++v) CHECK(std::abs(c(v, v) - 1.0) <= 0.01);

    const double w = 0.6;
    const Dag chain = Dag::from_edges(2, {{0, 1}}, w);
    const Matrix yc = ancestral_sample(chain, {NoiseDist::gaussian, Vector::Ones(2)}, 200000, 9);
    // cov(Y0, Y1) = w; its standard error is sqrt((1 + w^2 + w^2) / n).
    CHECK(std::abs(empirical_cov(yc)(0, 1) - w) <= 5.0 * std::sqrt((1 + 2 * w * w) / 200000.0));

    const Matrix none = ancestral_sample(chain, {NoiseDist::gaussian, Vector::Ones(2)}, 0, 1);
    CHECK(none.rows() == 0);
    CHECK(none.cols() == 2);
}

TEST_CASE("ancestral sampling equals the matrix solve") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 11;
        const Dag d = sample_weights_uniform(random_dag(n, 0.4, rng), 0.1, 0.9, 0.5, rng);
        const NoiseSpec spec{NoiseDist::laplace, Vector::Constant(n, 1.3)};
        const Matrix eps = draw_noise(spec, 200, static_cast<std::uint64_t>(trial));
        const Matrix a = ancestral_from_noise(d, eps);
        const Matrix b = solve_sample_oracle({d.weights(), Matrix(spec.variance.asDiagonal())}, eps);
        CHECK(max_abs(a - b) <= 1e-10);
        CHECK(ancestral_sample(d, spec, 200, static_cast<std::uint64_t>(trial)) == a);
    }
    const Matrix eps = draw_noise({NoiseDist::gaussian, Vector::Ones(3)}, 10, 1);
    CHECK(solve_sample_oracle({Matrix::Zero(3, 3), Matrix::Identity(3, 3)}, eps) == eps);

    Matrix omega = Matrix::Identity(2, 2);
    omega(0, 1) = omega(1, 0) = 0.2;
    CHECK_THROWS_AS(solve_sample_oracle({Matrix::Zero(2, 2), omega}, Matrix::Zero(1, 2)), InvariantViolation);
}

TEST_CASE("schedule independence") {
    Rng rng(1);
    const Dag d = sample_weights_uniform(random_dag(9, 0.3, rng), 0.1, 0.5, 0.5, rng);
    const NoiseSpec spec{NoiseDist::gaussian, Vector::Ones(9)};
    const Matrix serial = ancestral_sample(d, spec, 5000, 77, 1);
    for (int threads : {2, 3, 8}) CHECK(ancestral_sample(d, spec, 5000, 77, threads) == serial);
    // A row depends only on its own index.
    CHECK(ancestral_sample(d, spec, 100, 77).row(42) == serial.row(42));
}

TEST_CASE("explicit sampling follows the implied covariance") {
    ExplicitModel m;
    m.W_o = Matrix::Zero(3, 3);
    m.W_o(2, 1) = 0.5;
    m.Lambda = Matrix(3, 1);
    m.Lambda << 1.0, 0.8, 0.0;
    m.xi_var = Vector::Ones(1);
    m.eps_var = Vector::Ones(3);
    const Matrix y = sample_explicit(m, NoiseDist::gaussian, 400000, 3);
    const Matrix s = sigma_of(explicit_to_implicit(m));
    CHECK(max_abs(empirical_cov(y) - s) <= 0.02);
}

TEST_CASE("hiding columns") {
    Matrix full = Matrix::Zero(2, 12);
    for (int v = 0; v < 12; ++v) full.col(v).setConstant(v);
    const auto all = hide_columns(full, VertexSet(12));
    CHECK(all.cols() == 12);
    const auto d = hide_columns(full, make_set(12, {2, 4, 6, 9}));
    CHECK(d.names == std::vector<std::string>{"X0", "X1", "X3", "X5", "X7", "X8", "X10", "X11"});
    CHECK(d.values(1, 2) == 3.0);
    VertexSet every(12);
    every.set();
    const auto none = hide_columns(full, every);
    CHECK(none.cols() == 0);
    CHECK(none.rows() == 2);
}

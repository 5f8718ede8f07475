#include "latentbench/sampler.hpp"

#include "latentbench/errors.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace latentbench {

namespace {

double draw(NoiseDist dist, double variance, CounterStream& stream) {
    switch (dist) {
        case NoiseDist::gaussian: {
            std::normal_distribution<double> d(0.0, std::sqrt(variance));
            return d(stream);
        }
        case NoiseDist::uniform: {
            const double half = std::sqrt(3.0 * variance);
            std::uniform_real_distribution<double> d(-half, half);
            return d(stream);
        }
        case NoiseDist::laplace: {
            // Difference of two unit exponentials is a unit Laplace.
            const double b = std::sqrt(variance / 2.0);
            std::exponential_distribution<double> e(1.0);
            const double x = e(stream);
            return b * (x - e(stream));
        }
    }
    return 0.0;
}

template <class Fn>
void for_rows(int rows, int threads, Fn&& fn) {
    threads = std::max(1, std::min(threads, rows));
    if (threads == 1) {
        for (int r = 0; r < rows; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int r = t; r < rows; r += threads) fn(r);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

std::string to_string(NoiseDist dist) {
    switch (dist) {
        case NoiseDist::gaussian: return "gaussian";
        case NoiseDist::uniform: return "uniform";
        case NoiseDist::laplace: return "laplace";
    }
    return "unknown";
}

NoiseDist parse_noise_dist(std::string_view name) {
    if (name == "gaussian") return NoiseDist::gaussian;
    if (name == "uniform") return NoiseDist::uniform;
    if (name == "laplace") return NoiseDist::laplace;
    throw ConfigInvalid("unknown noise distribution '" + std::string(name) + "'");
}

void NoiseSpec::validate() const {
    for (int v = 0; v < variance.size(); ++v)
        if (!(variance(v) > 0.0) || !std::isfinite(variance(v)))
            throw InvariantViolation("noise variance must be positive and finite");
}

Matrix draw_noise(const NoiseSpec& noise, int samples, std::uint64_t seed, int threads) {
    noise.validate();
    if (samples < 0) throw InvalidRange("sample count must be >= 0");
    const int n = static_cast<int>(noise.variance.size());
    Matrix eps(samples, n);
    for_rows(samples, threads, [&](int r) {
        for (int v = 0; v < n; ++v) {
            CounterStream stream(seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(v));
            eps(r, v) = draw(noise.dist, noise.variance(v), stream);
        }
    });
    return eps;
}

Matrix ancestral_from_noise(const Dag& dag, const Matrix& noise) {
    if (noise.cols() != dag.size()) throw InvariantViolation("noise width does not match the DAG");
    Matrix y(noise.rows(), noise.cols());
    for (int v : dag.topological_order()) {
        y.col(v) = noise.col(v);
        for (int p : dag.parents(v)) y.col(v) += dag.weight(p, v) * y.col(p);
    }
    return y;
}

Matrix ancestral_sample(const Dag& dag, const NoiseSpec& noise, int samples, std::uint64_t seed,
                        int threads) {
    if (noise.variance.size() != dag.size()) throw InvariantViolation("one noise variance per vertex");
    return ancestral_from_noise(dag, draw_noise(noise, samples, seed, threads));
}

Matrix solve_sample_oracle(const ImplicitModel& m, const Matrix& noise) {
    const int n = m.size();
    Matrix off = m.Omega;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 0.0 && n > 0)
        throw InvariantViolation("matrix-solve oracle needs a diagonal Omega");
    if (noise.cols() != n) throw InvariantViolation("noise width does not match the model");
    Eigen::FullPivLU<Matrix> lu(Matrix::Identity(n, n) - m.W);
    if (!lu.isInvertible()) throw SingularSolve("I - W is singular");
    // Rows are samples, so Y^T = (I - W)^-1 eps^T.
    return lu.solve(noise.transpose()).transpose();
}

Matrix sample_explicit(const ExplicitModel& m, NoiseDist dist, int samples, std::uint64_t seed,
                       int threads) {
    const Dag block = explicit_block_adjacency(m);
    NoiseSpec noise{dist, Vector(m.observed() + m.latent())};
    noise.variance << m.eps_var, m.xi_var;
    const Matrix full = ancestral_sample(block, noise, samples, seed, threads);
    return full.leftCols(m.observed());
}

Dataset hide_columns(const Matrix& full, const VertexSet& hidden) {
    if (static_cast<Eigen::Index>(hidden.size()) != full.cols())
        throw InvariantViolation("hidden set universe does not match the column count");
    Dataset d;
    for (int v = 0; v < full.cols(); ++v)
        if (!hidden.test(v)) {
            d.vertices.push_back(v);
            d.names.push_back("X" + std::to_string(v));
        }
    d.values.resize(full.rows(), static_cast<Eigen::Index>(d.vertices.size()));
    for (std::size_t k = 0; k < d.vertices.size(); ++k) d.values.col(static_cast<Eigen::Index>(k)) = full.col(d.vertices[k]);
    return d;
}

}  // namespace latentbench

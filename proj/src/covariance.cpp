#include "latentbench/covariance.hpp"

#include "latentbench/errors.hpp"
#include "latentbench/linalg.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace latentbench {

namespace {

struct WeightedPath {
    std::vector<int> vertices;
    double weight;
};

// All directed paths ending at `end`, extended backwards through parents.
std::vector<WeightedPath> paths_into(const Matrix& w, int end) {
    std::vector<WeightedPath> out;
    std::vector<int> rev{end};
    std::function<void(int, double)> walk = [&](int v, double weight) {
        std::vector<int> path(rev.rbegin(), rev.rend());
        out.push_back({std::move(path), weight});
        for (int p = 0; p < w.rows(); ++p) {
            if (w(v, p) == 0.0) continue;
            rev.push_back(p);
            walk(p, weight * w(v, p));
            rev.pop_back();
        }
    };
    walk(end, 1.0);
    return out;
}

Matrix cholesky_solve_or_throw(const Matrix& block, const Matrix& rhs) {
    Eigen::LLT<Matrix> llt(block);
    if (llt.info() != Eigen::Success || !is_positive_definite(block))
        throw DegenerateConditioning("conditioning block of Sigma is singular");
    return llt.solve(rhs);
}

// Regression residual of `target` on `regressors`, as a coefficient vector on
// the full index set.
Vector residual_coefficients(const Matrix& sigma, int target, const std::vector<int>& regressors) {
    Vector a = Vector::Zero(sigma.rows());
    a(target) = 1.0;
    if (regressors.empty()) return a;
    const Matrix scc = submatrix(sigma, regressors, regressors);
    const Matrix sct = submatrix(sigma, regressors, {target});
    const Matrix beta = cholesky_solve_or_throw(scc, sct);
    for (std::size_t k = 0; k < regressors.size(); ++k) a(regressors[k]) = -beta(k, 0);
    return a;
}

double residual_corr(const Matrix& sigma, const Vector& a, const Vector& b) {
    return a.dot(sigma * b) / std::sqrt(a.dot(sigma * a) * b.dot(sigma * b));
}

std::vector<int> all_but(int n, std::initializer_list<int> drop) {
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if (std::find(drop.begin(), drop.end(), v) == drop.end()) out.push_back(v);
    return out;
}

}  // namespace

Matrix sigma_of(const ImplicitModel& m) {
    const int n = m.size();
    const Matrix a = Matrix::Identity(n, n) - m.W;
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) throw SingularSolve("I - W is singular");
    const Matrix inv = lu.inverse();
    return symmetrize(inv * m.Omega * inv.transpose());
}

std::vector<Trek> enumerate_treks(const ImplicitModel& m, int u, int v) {
    const auto left = paths_into(m.W, u);
    const auto right = paths_into(m.W, v);
    std::vector<Trek> out;
    for (const auto& l : left)
        for (const auto& r : right) {
            const int t1 = l.vertices.front();
            const int t2 = r.vertices.front();
            const double omega = m.Omega(t1, t2);
            if (omega == 0.0) continue;
            out.push_back({{t1, t2}, l.vertices, r.vertices, omega * l.weight * r.weight});
        }
    return out;
}

double trek_covariance(const ImplicitModel& m, int u, int v) {
    double total = 0.0;
    for (const auto& t : enumerate_treks(m, u, v)) total += t.value;
    return total;
}

Matrix precision_of(const Matrix& sigma) { return symmetrize(spd_inverse(sigma)); }

Matrix correlation_of(const Matrix& cov) {
    const Vector s = cov.diagonal().cwiseSqrt().cwiseInverse();
    return symmetrize(s.asDiagonal() * cov * s.asDiagonal());
}

Matrix partial_corr_raw(const Matrix& sigma) {
    const Matrix p = precision_of(sigma);
    const Vector d = p.diagonal().cwiseSqrt().cwiseInverse();
    return symmetrize(-(d.asDiagonal() * p * d.asDiagonal()));
}

Matrix partial_corr_matrix(const Matrix& sigma) {
    Matrix r = partial_corr_raw(sigma);
    r.diagonal().setOnes();
    return r;
}

PartialCorrForms partial_corr_residual(const Matrix& sigma, int i, int j) {
    const int n = static_cast<int>(sigma.rows());
    if (i == j || i < 0 || j < 0 || i >= n || j >= n)
        throw InvariantViolation("partial correlation needs two distinct in-range indices");
    const auto rest = all_but(n, {i, j});
    PartialCorrForms out;
    out.definition = residual_corr(sigma, residual_coefficients(sigma, i, rest),
                                   residual_coefficients(sigma, j, rest));
    out.alternative = -residual_corr(sigma, residual_coefficients(sigma, i, all_but(n, {i})),
                                     residual_coefficients(sigma, j, all_but(n, {j})));
    return out;
}

CovarianceBundle covariance_bundle(const ImplicitModel& m) {
    CovarianceBundle b;
    b.Sigma = sigma_of(m);
    b.Precision = precision_of(b.Sigma);
    b.R_Y = correlation_of(b.Sigma);
    b.R_eps = correlation_of(m.Omega);
    b.PartialCorr = partial_corr_matrix(b.Sigma);
    return b;
}

}  // namespace latentbench

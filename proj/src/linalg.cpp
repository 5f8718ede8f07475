#include "latentbench/linalg.hpp"

#include "latentbench/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace latentbench {

Vector symmetric_eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols()) throw InvariantViolation("eigensolve needs a square matrix");
    if (m.rows() == 0) return Vector();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("symmetric eigensolve did not converge");
    return solver.eigenvalues();
}

double spectral_radius(const Matrix& symmetric) {
    const Vector ev = symmetric_eigenvalues(symmetric);
    return ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& symmetric) {
    const Vector ev = symmetric_eigenvalues(symmetric);
    return ev.size() == 0 ? 0.0 : ev(0);
}

bool is_symmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol) return false;
    return true;
}

bool is_positive_definite(const Matrix& symmetric) {
    if (symmetric.rows() == 0) return true;
    const Vector ev = symmetric_eigenvalues(symmetric);
    const double scale = ev.cwiseAbs().maxCoeff();
    return ev(0) > 1e-10 * scale && ev(0) > 0.0;
}

Matrix spd_inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw NotPositiveDefinite("matrix is not square");
    const Eigen::Index n = m.rows();
    if (n == 0) return Matrix();
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky factorization failed");
    const double scale = std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
    const Matrix l = llt.matrixL();
    for (Eigen::Index i = 0; i < n; ++i)
        if (l(i, i) * l(i, i) <= 1e-12 * scale)
            throw NotPositiveDefinite("Cholesky pivot " + std::to_string(i) + " below tolerance");
    return symmetrize(llt.solve(Matrix::Identity(n, n)));
}

Matrix submatrix(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
    return out;
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace latentbench

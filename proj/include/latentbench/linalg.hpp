#pragma once

#include "latentbench/graph.hpp"

#include <vector>

namespace latentbench {

/// Ascending eigenvalues of a symmetric matrix (lower triangle is read).
Vector symmetric_eigenvalues(const Matrix& m);
/// max |lambda| of a symmetric matrix via a full eigensolve.
double spectral_radius(const Matrix& symmetric);
double min_eigenvalue(const Matrix& symmetric);

bool is_symmetric(const Matrix& m, double tol = 0.0);
/// Smallest eigenvalue exceeds 1e-10 times the largest eigenvalue magnitude.
bool is_positive_definite(const Matrix& symmetric);

/// Inverse of a symmetric positive-definite matrix through a Cholesky
/// factorization. Throws NotPositiveDefinite when a pivot drops to 1e-12 or
/// below (the threshold is taken relative to the largest diagonal entry).
Matrix spd_inverse(const Matrix& m);

Matrix submatrix(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols);
Matrix symmetrize(const Matrix& m);
double max_abs(const Matrix& m);

}  // namespace latentbench

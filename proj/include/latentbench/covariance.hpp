#pragma once

#include "latentbench/graph.hpp"
#include "latentbench/param.hpp"

#include <utility>
#include <vector>

namespace latentbench {

/// Sigma = (I - W)^-1 Omega (I - W)^-T. Throws SingularSolve if I - W is not
/// invertible, which cannot happen for an acyclic W.
Matrix sigma_of(const ImplicitModel& m);

struct Trek {
    std::pair<int, int> top;
    /// Vertex sequence t1 ... u along directed edges (just {u} when t1 == u).
    std::vector<int> left_path;
    std::vector<int> right_path;
    double value = 0.0;
};

/// Every trek from u to v whose top pair has a nonzero Omega entry, including
/// the empty trek at (u, v). Exponential in the worst case.
std::vector<Trek> enumerate_treks(const ImplicitModel& m, int u, int v);
double trek_covariance(const ImplicitModel& m, int u, int v);

/// Throws NotPositiveDefinite.
Matrix precision_of(const Matrix& sigma);
/// D^-1/2 M D^-1/2 with D = diag(M).
Matrix correlation_of(const Matrix& cov);

/// -D P D with P the precision and D = diag(P)^-1/2; its diagonal is -1.
Matrix partial_corr_raw(const Matrix& sigma);
/// As partial_corr_raw but with +1 stored on the diagonal.
Matrix partial_corr_matrix(const Matrix& sigma);

struct PartialCorrForms {
    /// Correlation of the residuals of i and j after regressing both on all
    /// other variables.
    double definition = 0.0;
    /// Negated correlation of the residual of i on everything but i with the
    /// residual of j on everything but j.
    double alternative = 0.0;
};

/// Population regressions from Sigma blocks. Throws DegenerateConditioning
/// when a conditioning block is singular.
PartialCorrForms partial_corr_residual(const Matrix& sigma, int i, int j);

struct CovarianceBundle {
    Matrix Sigma;
    Matrix Precision;
    Matrix R_Y;
    Matrix R_eps;
    Matrix PartialCorr;
};

CovarianceBundle covariance_bundle(const ImplicitModel& m);

}  // namespace latentbench

#pragma once

#include "latentbench/graph.hpp"
#include "latentbench/param.hpp"
#include "latentbench/rng.hpp"

#include <string>
#include <vector>

namespace latentbench {

inline constexpr double kBoundSlack = 1e-9;

struct BoundCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
};

struct AuditReport {
    Vector delta;
    double rho_Omega = 0.0;
    double rho_R_eps = 0.0;
    double rho_Omega_inv = 0.0;
    double rho_Sigma_inv = 0.0;
    double rho_Rtilde = 0.0;
    double rho_WplusWT = 0.0;
    int d_max = 0;
    double max_absW = 0.0;
    double max_diag_Omega = 0.0;
    /// min delta > 0. When false only the graph bound is checked.
    bool dominant = false;
    std::vector<BoundCheck> bounds;
    /// Recorded but never asserted: the graph bound with the signed maximum
    /// weight, and the positive-entry precision bound when it applies.
    std::vector<BoundCheck> informational;

    bool all_satisfied() const;
    const BoundCheck* find(const std::string& name) const;
};

/// Delta_i = |Omega_ii| - sum_{j != i} |Omega_ij|.
Vector dominance_margins(const Matrix& omega);

/// Bound names, in order: rho_Omega, rho_R_eps, rho_Omega_inv, rho_WplusWT,
/// rho_Sigma_inv, Sigma_diag, rho_Rtilde.
AuditReport audit_model(const ImplicitModel& m);

/// Equicorrelation matrix (1 on the diagonal, r elsewhere).
Matrix equicorrelation(int n, double r);
/// Largest eigenvalue magnitude of equicorrelation(n, r).
double equicorrelation_radius(int n, double r);

struct CoverageSummary {
    int n = 0;
    double max_rho_dominant = 0.0;
    double max_rho_unconstrained = 0.0;
    int unconstrained_above_two = 0;
};

/// Max rho(R_eps) over diagonally dominant Omegas versus max rho(R) over
/// correlation matrices normalized from unconstrained random PD draws.
CoverageSummary coverage_contrast(int n, int dominant_count, int unconstrained_count, Rng& rng);

}  // namespace latentbench

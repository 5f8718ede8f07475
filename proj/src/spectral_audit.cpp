#include "latentbench/spectral_audit.hpp"

#include "latentbench/covariance.hpp"
#include "latentbench/errors.hpp"
#include "latentbench/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latentbench {

namespace {

BoundCheck check(std::string name, double lhs, double rhs) {
    return {std::move(name), lhs, rhs, lhs <= rhs + kBoundSlack};
}

int max_total_degree(const Matrix& w) {
    int best = 0;
    for (int v = 0; v < w.rows(); ++v) {
        const int deg = static_cast<int>((w.row(v).array() != 0.0).count() + (w.col(v).array() != 0.0).count());
        best = std::max(best, deg);
    }
    return best;
}

}  // namespace

bool AuditReport::all_satisfied() const {
    return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.satisfied; });
}

const BoundCheck* AuditReport::find(const std::string& name) const {
    for (const auto& b : bounds)
        if (b.name == name) return &b;
    return nullptr;
}

Vector dominance_margins(const Matrix& omega) {
    if (omega.rows() != omega.cols()) throw InvariantViolation("dominance margins need a square matrix");
    Vector d(omega.rows());
    for (int i = 0; i < omega.rows(); ++i) {
        double off = 0.0;
        for (int j = 0; j < omega.cols(); ++j)
            if (j != i) off += std::abs(omega(i, j));
        d(i) = std::abs(omega(i, i)) - off;
    }
    return d;
}

AuditReport audit_model(const ImplicitModel& m) {
    m.validate();
    AuditReport r;
    const int n = m.size();
    const Matrix& w = m.W;
    const Matrix& omega = m.Omega;

    r.delta = dominance_margins(omega);
    r.dominant = n > 0 && r.delta.minCoeff() > 0.0;
    r.d_max = max_total_degree(w);
    r.max_absW = max_abs(w);
    r.max_diag_Omega = n > 0 ? omega.diagonal().cwiseAbs().maxCoeff() : 0.0;

    const Matrix sigma = sigma_of(m);
    r.rho_Omega = spectral_radius(omega);
    r.rho_R_eps = spectral_radius(correlation_of(omega));
    r.rho_Omega_inv = spectral_radius(spd_inverse(omega));
    r.rho_Sigma_inv = spectral_radius(precision_of(sigma));
    r.rho_Rtilde = spectral_radius(partial_corr_raw(sigma));
    r.rho_WplusWT = spectral_radius(w + w.transpose());

    const double signed_max_w = n > 0 ? w.maxCoeff() : 0.0;
    r.informational.push_back(check("rho_WplusWT_signed", r.rho_WplusWT, r.d_max * signed_max_w));

    if (!r.dominant) {
        r.bounds.push_back(check("rho_WplusWT", r.rho_WplusWT, r.d_max * r.max_absW));
        return r;
    }

    const double inv_delta = r.delta.cwiseInverse().maxCoeff();
    const double two_diag = 2.0 * r.max_diag_Omega;
    r.bounds.push_back(check("rho_Omega", r.rho_Omega, two_diag));
    r.bounds.push_back(check("rho_R_eps", r.rho_R_eps, 2.0));
    r.bounds.push_back(check("rho_Omega_inv", r.rho_Omega_inv, inv_delta));
    r.bounds.push_back(check("rho_WplusWT", r.rho_WplusWT, r.d_max * r.max_absW));
    r.bounds.push_back(check("rho_Sigma_inv", r.rho_Sigma_inv, (r.rho_WplusWT + 1.0) * inv_delta));
    r.bounds.push_back(check("Sigma_diag", n > 0 ? sigma.diagonal().maxCoeff() : 0.0, two_diag));
    r.bounds.push_back(
        check("rho_Rtilde", r.rho_Rtilde, two_diag * (r.d_max * r.max_absW + 1.0) * inv_delta));

    const double ell = n > 0 ? omega.minCoeff() : 0.0;
    if (n >= 3 && ell > 0.0) {
        const double hillar = (3.0 * n - 4.0) / (2.0 * ell * (n - 2.0) * (n - 1.0));
        const Matrix inv = spd_inverse(omega);
        r.informational.push_back(check("Omega_inv_inf_norm_positive", inv.cwiseAbs().rowwise().sum().maxCoeff(), hillar));
    }
    return r;
}

Matrix equicorrelation(int n, double r) {
    Matrix m = Matrix::Constant(n, n, r);
    m.diagonal().setOnes();
    return m;
}

double equicorrelation_radius(int n, double r) {
    if (n <= 0) return 0.0;
    const double top = 1.0 + (n - 1) * r;
    return n == 1 ? 1.0 : std::max(std::abs(top), std::abs(1.0 - r));
}

CoverageSummary coverage_contrast(int n, int dominant_count, int unconstrained_count, Rng& rng) {
    if (n < 2) throw InvalidRange("coverage contrast needs n >= 2");
    CoverageSummary s;
    s.n = n;
    for (int k = 0; k < dominant_count; ++k) {
        const Matrix off = sample_symmetric_offdiag(n, 0.5, 0.0, 1.0, 0.5, rng);
        s.max_rho_dominant = std::max(s.max_rho_dominant, spectral_radius(correlation_of(build_omega_diag_dominant(off))));
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> factor(0.0, static_cast<double>(n));
    for (int k = 0; k < unconstrained_count; ++k) {
        Matrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
        // A random-strength common factor reaches the near-equicorrelated corner.
        Matrix cov = g * g.transpose() / n + factor(rng) * Matrix::Ones(n, n);
        cov.diagonal().array() += 1e-6;
        const double rho = spectral_radius(correlation_of(cov));
        s.max_rho_unconstrained = std::max(s.max_rho_unconstrained, rho);
        if (rho > 2.0) ++s.unconstrained_above_two;
    }
    return s;
}

}  // namespace latentbench

#pragma once

#include <string>

#include <Eigen/Core>

#include "gpsim/errors.hpp"

namespace gpsim {

/// Smallest admissible nugget; keeps correlation matrices positive definite
/// even with duplicate design rows.
inline constexpr double kEtaFloor = 1e-8;

enum class KernelFamily { SIM, Separable, Isotropic };

std::string family_name(KernelFamily family);

/// Gaussian correlation spec. SIM uses the rank-1 form
/// exp{-((xi-xj)'beta)^2}; Separable/Isotropic use per-dimension
/// length-scales exp{-sum_k (xi_k-xj_k)^2/theta_k}. The nugget eta is added
/// on the diagonal of training correlation matrices.
struct KernelSpec {
    KernelFamily family = KernelFamily::SIM;
    Eigen::VectorXd beta;   // SIM index vector (unconstrained sign and norm)
    Eigen::VectorXd theta;  // Separable: length p; Isotropic: length 1
    double eta = kEtaFloor;

    /// eta is floored at kEtaFloor.
    static KernelSpec sim(Eigen::VectorXd beta, double eta);
    static KernelSpec separable(Eigen::VectorXd theta, double eta);
    static KernelSpec isotropic(double theta, double eta);
    /// Builds a spec from a chain-style parameter vector (beta for SIM,
    /// theta otherwise).
    static KernelSpec from_param(KernelFamily family, const Eigen::VectorXd& param, double eta);

    const Eigen::VectorXd& param() const;
    /// Correlation between two points, no nugget. Isotropic specs accept any
    /// dimension; others require a match with the stored parameter length.
    double correlation(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj) const;
    std::string describe() const;
};

/// Correlation matrix with cached Cholesky factor and log-determinant.
/// `entries` includes the nugget on the diagonal plus any escalation jitter
/// that was needed to reach positive definiteness, so chol always
/// reconstructs `entries`.
struct CorrMatrix {
    Eigen::MatrixXd entries;
    Eigen::MatrixXd chol;  // lower triangular
    double logdet = 0.0;
    double jitter = 0.0;

    Eigen::Index n() const { return entries.rows(); }
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const;
    /// y' K^{-1} y through the Cholesky factor.
    double quad_form(const Eigen::VectorXd& y) const;
    /// L^{-1} B (half solve), handy for predictive cross terms.
    Eigen::MatrixXd half_solve(const Eigen::MatrixXd& B) const;
};

/// exp{-((xi-xj)'beta)^2}. Symmetric in (xi, xj) and invariant under
/// beta -> -beta.
double sim_corr(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj, const Eigen::VectorXd& beta);

/// exp{-sum_k (xi_k-xj_k)^2/theta_k}; all theta_k must be positive.
double anisotropic_corr(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                        const Eigen::VectorXd& theta);

/// Family correlation matrix of X against itself, nugget on the diagonal,
/// no factorization.
Eigen::MatrixXd corr_entries(const Eigen::MatrixXd& X, const KernelSpec& spec);

/// Cholesky with jitter escalation (1e-10 up to 1e-6, x10 per retry); throws
/// SingularMatrixError naming `context` when escalation runs out.
CorrMatrix corr_from_entries(Eigen::MatrixXd entries, const std::string& context);

/// Correlation matrix with cached Cholesky/log-determinant. Warns (does not
/// fail) when rows of X leave the unit cube.
CorrMatrix build_corr_matrix(const Eigen::MatrixXd& X, const KernelSpec& spec);

/// n-vector of correlations between xstar and the rows of X. The nugget
/// applies only where xstar exactly equals a training row.
Eigen::VectorXd cross_corr(const Eigen::VectorXd& xstar, const Eigen::MatrixXd& X,
                           const KernelSpec& spec);

/// N x n cross-correlation block, rows of Xstar against rows of X.
Eigen::MatrixXd cross_corr_matrix(const Eigen::MatrixXd& Xstar, const Eigen::MatrixXd& X,
                                  const KernelSpec& spec);

}  // namespace gpsim

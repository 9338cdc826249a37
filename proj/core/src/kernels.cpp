#include "gpsim/kernels.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace gpsim {

namespace {

void check_theta(const Eigen::VectorXd& theta) {
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
        if (!(theta(k) > 0.0)) {
            throw std::invalid_argument("KernelSpec: theta must be positive, got " +
                                        std::to_string(theta(k)) + " in component " +
                                        std::to_string(k + 1));
        }
    }
}

// Squared distances weighted by 1/theta_k, theta broadcast when scalar.
Eigen::MatrixXd weighted_sqdist(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                const Eigen::VectorXd& theta) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(A.rows(), B.rows());
    for (Eigen::Index k = 0; k < A.cols(); ++k) {
        const double th = theta.size() == 1 ? theta(0) : theta(k);
        D += ((A.col(k).replicate(1, B.rows()).rowwise() - B.col(k).transpose()).array().square() /
              th)
                 .matrix();
    }
    return D;
}

}  // namespace

std::string family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::SIM: return "sim";
        case KernelFamily::Separable: return "sep";
        case KernelFamily::Isotropic: return "iso";
    }
    return "?";
}

KernelSpec KernelSpec::sim(Eigen::VectorXd beta, double eta) {
    KernelSpec s;
    s.family = KernelFamily::SIM;
    s.beta = std::move(beta);
    s.eta = std::max(eta, kEtaFloor);
    return s;
}

KernelSpec KernelSpec::separable(Eigen::VectorXd theta, double eta) {
    check_theta(theta);
    KernelSpec s;
    s.family = KernelFamily::Separable;
    s.theta = std::move(theta);
    s.eta = std::max(eta, kEtaFloor);
    return s;
}

KernelSpec KernelSpec::isotropic(double theta, double eta) {
    KernelSpec s;
    s.family = KernelFamily::Isotropic;
    s.theta = Eigen::VectorXd::Constant(1, theta);
    check_theta(s.theta);
    s.eta = std::max(eta, kEtaFloor);
    return s;
}

KernelSpec KernelSpec::from_param(KernelFamily family, const Eigen::VectorXd& param, double eta) {
    switch (family) {
        case KernelFamily::SIM: return sim(param, eta);
        case KernelFamily::Separable: return separable(param, eta);
        case KernelFamily::Isotropic:
            if (param.size() != 1) {
                throw std::invalid_argument("isotropic spec expects a single theta");
            }
            return isotropic(param(0), eta);
    }
    throw std::invalid_argument("unknown kernel family");
}

const Eigen::VectorXd& KernelSpec::param() const {
    return family == KernelFamily::SIM ? beta : theta;
}

double KernelSpec::correlation(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj) const {
    if (family == KernelFamily::SIM) return sim_corr(xi, xj, beta);
    if (xi.size() != xj.size()) {
        throw std::invalid_argument("correlation: point dimension mismatch");
    }
    Eigen::VectorXd th = theta;
    if (family == KernelFamily::Isotropic && xi.size() != 1) {
        th = Eigen::VectorXd::Constant(xi.size(), theta(0));
    }
    return anisotropic_corr(xi, xj, th);
}

std::string KernelSpec::describe() const {
    std::ostringstream os;
    os << family_name(family) << "(";
    const Eigen::VectorXd& v = param();
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
    os << "; eta=" << eta << ")";
    return os.str();
}

Eigen::VectorXd CorrMatrix::solve(const Eigen::VectorXd& b) const {
    Eigen::VectorXd x = chol.triangularView<Eigen::Lower>().solve(b);
    return chol.triangularView<Eigen::Lower>().transpose().solve(x);
}

Eigen::MatrixXd CorrMatrix::solve(const Eigen::MatrixXd& B) const {
    Eigen::MatrixXd X = chol.triangularView<Eigen::Lower>().solve(B);
    return chol.triangularView<Eigen::Lower>().transpose().solve(X);
}

double CorrMatrix::quad_form(const Eigen::VectorXd& y) const {
    return chol.triangularView<Eigen::Lower>().solve(y).squaredNorm();
}

Eigen::MatrixXd CorrMatrix::half_solve(const Eigen::MatrixXd& B) const {
    return chol.triangularView<Eigen::Lower>().solve(B);
}

double sim_corr(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                const Eigen::VectorXd& beta) {
    if (xi.size() != xj.size() || xi.size() != beta.size()) {
        throw std::invalid_argument("sim_corr: dimension mismatch");
    }
    const double d = (xi - xj).dot(beta);
    return std::exp(-d * d);
}

double anisotropic_corr(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                        const Eigen::VectorXd& theta) {
    if (xi.size() != xj.size() || xi.size() != theta.size()) {
        throw std::invalid_argument("anisotropic_corr: dimension mismatch");
    }
    check_theta(theta);
    double s = 0.0;
    for (Eigen::Index k = 0; k < xi.size(); ++k) {
        const double d = xi(k) - xj(k);
        s += d * d / theta(k);
    }
    return std::exp(-s);
}

Eigen::MatrixXd corr_entries(const Eigen::MatrixXd& X, const KernelSpec& spec) {
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd K;
    if (spec.family == KernelFamily::SIM) {
        if (X.cols() != spec.beta.size()) {
            throw std::invalid_argument("corr_entries: X columns do not match beta length");
        }
        const Eigen::VectorXd t = X * spec.beta;
        K = (-(t.replicate(1, n).rowwise() - t.transpose()).array().square()).exp();
    } else {
        if (spec.family == KernelFamily::Separable && X.cols() != spec.theta.size()) {
            throw std::invalid_argument("corr_entries: X columns do not match theta length");
        }
        K = (-weighted_sqdist(X, X, spec.theta).array()).exp();
    }
    K.diagonal().array() += spec.eta;
    return K;
}

CorrMatrix corr_from_entries(Eigen::MatrixXd entries, const std::string& context) {
    CorrMatrix out;
    double jitter = 0.0;
    for (;;) {
        Eigen::LLT<Eigen::MatrixXd> llt(entries);
        if (llt.info() == Eigen::Success) {
            out.entries = std::move(entries);
            out.chol = llt.matrixL();
            out.logdet = 2.0 * out.chol.diagonal().array().log().sum();
            out.jitter = jitter;
            return out;
        }
        const double next = jitter == 0.0 ? 1e-10 : jitter * 10.0;
        if (next > 1e-6) {
            throw SingularMatrixError("correlation matrix not positive definite for " + context +
                                      " after jitter escalation to 1e-6");
        }
        entries.diagonal().array() += next - jitter;
        jitter = next;
    }
}

CorrMatrix build_corr_matrix(const Eigen::MatrixXd& X, const KernelSpec& spec) {
    if (X.rows() < 1) {
        throw std::invalid_argument("build_corr_matrix: empty design");
    }
    if (X.size() > 0 && (X.minCoeff() < 0.0 || X.maxCoeff() > 1.0)) {
        warn("build_corr_matrix: design rows outside the unit cube");
    }
    return corr_from_entries(corr_entries(X, spec), spec.describe());
}

Eigen::VectorXd cross_corr(const Eigen::VectorXd& xstar, const Eigen::MatrixXd& X,
                           const KernelSpec& spec) {
    if (xstar.size() != X.cols()) {
        throw std::invalid_argument("cross_corr: dimension mismatch");
    }
    Eigen::VectorXd k(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const Eigen::VectorXd xi = X.row(i);
        k(i) = spec.correlation(xstar, xi);
        if (xstar == xi) k(i) += spec.eta;  // Kronecker delta on exact equality
    }
    return k;
}

Eigen::MatrixXd cross_corr_matrix(const Eigen::MatrixXd& Xstar, const Eigen::MatrixXd& X,
                                  const KernelSpec& spec) {
    if (Xstar.cols() != X.cols()) {
        throw std::invalid_argument("cross_corr_matrix: dimension mismatch");
    }
    Eigen::MatrixXd K;
    if (spec.family == KernelFamily::SIM) {
        if (X.cols() != spec.beta.size()) {
            throw std::invalid_argument("cross_corr_matrix: columns do not match beta length");
        }
        const Eigen::VectorXd ts = Xstar * spec.beta;
        const Eigen::VectorXd t = X * spec.beta;
        K = (-(ts.replicate(1, X.rows()).rowwise() - t.transpose()).array().square()).exp();
    } else {
        if (spec.family == KernelFamily::Separable && X.cols() != spec.theta.size()) {
            throw std::invalid_argument("cross_corr_matrix: columns do not match theta length");
        }
        K = (-weighted_sqdist(Xstar, X, spec.theta).array()).exp();
    }
    for (Eigen::Index i = 0; i < Xstar.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.rows(); ++j) {
            if (Xstar.row(i) == X.row(j)) K(i, j) += spec.eta;
        }
    }
    return K;
}

}  // namespace gpsim

#include "gpsim/posterior.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace gpsim {

void PriorSpec::validate() const {
    const bool jeffreys = a_sigma == 0.0 && b_sigma == 0.0;
    if (!jeffreys && !(a_sigma > 0.0 && b_sigma > 0.0)) {
        throw std::invalid_argument(
            "PriorSpec: (a_sigma, b_sigma) must be (0, 0) or both positive");
    }
    if (!(a_eta > 0.0) || !(b_eta > 0.0)) {
        throw std::invalid_argument("PriorSpec: a_eta and b_eta must be positive");
    }
    if (!(a_theta > 0.0) || !(b_theta > 0.0)) {
        throw std::invalid_argument("PriorSpec: a_theta and b_theta must be positive");
    }
    if (const auto* g = std::get_if<SymmetricGammaPrior>(&beta_prior)) {
        if (!(g->a_beta > 0.0) || !(g->b_beta > 0.0)) {
            throw std::invalid_argument("PriorSpec: a_beta and b_beta must be positive");
        }
    } else {
        const auto& m = std::get<MVNPrior>(beta_prior);
        if (m.cov.rows() != m.cov.cols() || m.cov.rows() != m.mean.size()) {
            throw std::invalid_argument("PriorSpec: MVN prior dimension mismatch");
        }
    }
}

double gamma_log_pdf(double x, double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) {
        throw std::invalid_argument("gamma_log_pdf: shape and rate must be positive");
    }
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double log_marginal_likelihood(const Eigen::VectorXd& Y, const CorrMatrix& Kmat, double a_sigma,
                               double b_sigma) {
    const Eigen::Index n = Y.size();
    if (n != Kmat.n()) {
        throw std::invalid_argument("log_marginal_likelihood: Y/K size mismatch");
    }
    const bool jeffreys = a_sigma == 0.0 && b_sigma == 0.0;
    if (jeffreys && n <= 1) {
        throw std::invalid_argument("log_marginal_likelihood: Jeffreys prior needs n > 1");
    }
    const double q = Kmat.quad_form(Y);
    double lm = -0.5 * Kmat.logdet - 0.5 * n * std::log(2.0 * std::numbers::pi);
    lm += std::lgamma(0.5 * (a_sigma + n));
    if (a_sigma > 0.0) {
        lm += 0.5 * a_sigma * std::log(0.5 * b_sigma) - std::lgamma(0.5 * a_sigma);
    }
    lm -= 0.5 * (a_sigma + n) * std::log(0.5 * (b_sigma + q));
    return lm;
}

double log_prior(const KernelSpec& spec, const PriorSpec& priors) {
    priors.validate();
    if (!(spec.eta > 0.0)) {
        throw std::invalid_argument("log_prior: eta must be positive");
    }
    double lp = gamma_log_pdf(spec.eta, priors.a_eta, priors.b_eta);
    if (spec.family == KernelFamily::SIM) {
        if (const auto* g = std::get_if<SymmetricGammaPrior>(&priors.beta_prior)) {
            for (Eigen::Index j = 0; j < spec.beta.size(); ++j) {
                lp += gamma_log_pdf(std::abs(spec.beta(j)), g->a_beta, g->b_beta);
            }
            lp -= spec.beta.size() * std::log(2.0);
        } else {
            const auto& m = std::get<MVNPrior>(priors.beta_prior);
            if (m.mean.size() != spec.beta.size()) {
                throw std::invalid_argument("log_prior: MVN prior dimension mismatch with beta");
            }
            Eigen::LLT<Eigen::MatrixXd> llt(m.cov);
            if (llt.info() != Eigen::Success) {
                throw SingularMatrixError("log_prior: MVN prior covariance not PD");
            }
            const Eigen::MatrixXd L = llt.matrixL();
            const Eigen::VectorXd v = L.triangularView<Eigen::Lower>().solve(spec.beta - m.mean);
            lp += -0.5 * v.squaredNorm() - L.diagonal().array().log().sum() -
                  0.5 * spec.beta.size() * std::log(2.0 * std::numbers::pi);
        }
    } else {
        for (Eigen::Index k = 0; k < spec.theta.size(); ++k) {
            lp += gamma_log_pdf(spec.theta(k), priors.a_theta, priors.b_theta);
        }
    }
    return lp;
}

LogPosteriorValue log_posterior(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                                const KernelSpec& spec, const PriorSpec& priors) {
    LogPosteriorValue v;
    v.log_prior = log_prior(spec, priors);
    const CorrMatrix K = build_corr_matrix(X, spec);
    v.log_marginal_lik = log_marginal_likelihood(Y, K, priors.a_sigma, priors.b_sigma);
    v.total = v.log_prior + v.log_marginal_lik;
    return v;
}

}  // namespace gpsim

#pragma once

#include <variant>

#include <Eigen/Core>

#include "gpsim/kernels.hpp"

namespace gpsim {

/// Independent Gamma(a, b) on each |beta_j|, symmetric under sign change.
struct SymmetricGammaPrior {
    double a_beta = 1.5;
    double b_beta = 1.5;
};

/// Multivariate normal prior on beta for when directional prior
/// information is available.
struct MVNPrior {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

using BetaPrior = std::variant<SymmetricGammaPrior, MVNPrior>;

/// Hyperprior constants. (a_sigma, b_sigma) = (0, 0) is the Jeffreys scale
/// prior and needs n > 1. Defaults: Gamma(1.5, 30) on the nugget (mean
/// 0.05), Gamma(1.5, 1.5) on |beta_j| (mean 1), Gamma(1.5, 1.5) on each
/// length-scale for separable/isotropic fits. All Gammas are shape/rate.
struct PriorSpec {
    double a_sigma = 0.0;
    double b_sigma = 0.0;
    double a_eta = 1.5;
    double b_eta = 30.0;
    BetaPrior beta_prior = SymmetricGammaPrior{};
    double a_theta = 1.5;
    double b_theta = 1.5;

    /// Throws std::invalid_argument on inadmissible constants.
    void validate() const;
};

struct LogPosteriorValue {
    double log_prior = 0.0;
    double log_marginal_lik = 0.0;
    double total = 0.0;
};

/// log Gamma(shape, rate) density at x.
double gamma_log_pdf(double x, double shape, double rate);

/// Log of the sigma^2-marginalized likelihood
///   (b/2)^{a/2} Gamma[(a+n)/2] / (|K|^{1/2} (2 pi)^{n/2} Gamma[a/2])
///     * ((b + Y'K^{-1}Y)/2)^{-(a+n)/2}
/// with Gamma[0] == 1 and 0^0 == 1 so that (a, b) = (0, 0) gives the
/// Jeffreys case (valid only for n > 1).
double log_marginal_likelihood(const Eigen::VectorXd& Y, const CorrMatrix& Kmat, double a_sigma,
                               double b_sigma);

/// Log prior density of the kernel parameters: Gamma on eta plus the beta
/// prior (SIM) or Gamma on each length-scale (separable/isotropic).
double log_prior(const KernelSpec& spec, const PriorSpec& priors);

/// Builds the correlation matrix once and returns the decomposed
/// marginalized log posterior.
LogPosteriorValue log_posterior(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                                const KernelSpec& spec, const PriorSpec& priors);

}  // namespace gpsim

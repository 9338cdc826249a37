#pragma once

#include <vector>

#include <Eigen/Core>

#include "gpsim/mcmc.hpp"

namespace gpsim {

/// Student-t predictive law: mean vector, scale matrix (1x1 for a single
/// point), and degrees of freedom a_sigma + n - 1.
struct PredictiveT {
    Eigen::VectorXd mean;
    Eigen::MatrixXd scale;
    double dof = 0.0;
};

struct PredictOptions {
    /// Predict the latent process instead of the noisy response: the nugget
    /// is removed from the predictive diagonal. Off by default so the
    /// predictive targets a new observation of Y.
    bool latent = false;
};

/// Pointwise kriging predictive: mean k_n'(x) K^{-1} Y and scale
/// (b_sigma + Y'K^{-1}Y) [K(x,x) - k_n'(x) K^{-1} k_n(x)] / (a_sigma + n - 1)
/// with K(x,x) = 1 + eta (or 1 with opts.latent).
PredictiveT predictive(const Eigen::VectorXd& xstar, const Eigen::VectorXd& Y,
                       const Eigen::MatrixXd& X, const KernelSpec& spec, const PriorSpec& priors,
                       PredictOptions opts = {});

/// Joint predictive over the rows of Xstar; the diagonal of the scale
/// matrix agrees with the pointwise predictive.
PredictiveT joint_predictive(const Eigen::MatrixXd& Xstar, const Eigen::VectorXd& Y,
                             const Eigen::MatrixXd& X, const KernelSpec& spec,
                             const PriorSpec& priors, PredictOptions opts = {});

/// n_draws x N multivariate Student-t sample paths via the scale-mixture
/// construction. Warns when dof <= 2 (undefined covariance) but still draws.
Eigen::MatrixXd sample_paths(const PredictiveT& pred, int n_draws, Rng& rng);

/// Equal-weight Student-t mixture over the chain: average of per-sample
/// means, total-variance sd, and sampled quantiles (draws_per_sample draws
/// per stored sample, per-point deterministic substreams). mean_index holds
/// the posterior mean index x'beta for SIM chains and zeros otherwise.
struct MixturePrediction {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;
    Eigen::MatrixXd quantiles;  // N x probs.size()
    std::vector<double> probs;
    Eigen::VectorXd mean_index;
};

MixturePrediction mixture_predict(const Eigen::MatrixXd& Xstar, const Eigen::VectorXd& Y,
                                  const Eigen::MatrixXd& X, const Chain& chain,
                                  const PriorSpec& priors, const std::vector<double>& quantiles,
                                  PredictOptions opts = {}, int draws_per_sample = 100,
                                  std::uint64_t seed = 0x6d697871756e74ULL);

/// Mixture moments of the joint predictive across the chain: mean of the
/// per-sample means and, by the law of total covariance, the mean of the
/// per-sample covariances (scale * dof/(dof-2)) plus the covariance of the
/// per-sample means.
struct MixtureMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    double dof = 0.0;
};

MixtureMoments mixture_joint_moments(const Eigen::MatrixXd& Xstar, const Eigen::VectorXd& Y,
                                     const Eigen::MatrixXd& X, const Chain& chain,
                                     const PriorSpec& priors, PredictOptions opts = {});

/// Per-sample indices x'beta^(t) at the rows of Xstar (SIM chains).
struct PosteriorIndices {
    Eigen::VectorXd mean;         // N
    Eigen::MatrixXd per_sample;   // T x N
};

PosteriorIndices posterior_indices(const Eigen::MatrixXd& Xstar, const Chain& chain);

}  // namespace gpsim

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "gpsim/dataset.hpp"
#include "gpsim/mcmc.hpp"
#include "gpsim/metrics.hpp"

namespace gpsim {

/// Periodic index-response link sin(pi t/5) + cos(4 pi t/5)/5.
double sinusoid_link(double t);

/// Index vector of the synthetic sinusoid generator.
Eigen::Vector4d sinusoid_index();

/// Uniform design on [0,1]^4 with Y = link(X beta) + N(0, noise_sd^2);
/// f_true keeps the noise-free responses.
Dataset gen_sinusoid(int n, Rng& rng, double noise_sd = 0.1);

/// Water-flow response of an 8-input well model; x holds
/// (r_w, r, T_u, T_l, H_u, H_l, L, K_w) in physical units. With
/// strict_bounds, inputs outside the standard rectangle are an error;
/// otherwise they only warn. r <= r_w is always an error.
double borehole(const Eigen::VectorXd& x, bool strict_bounds = true);

/// The standard borehole input rectangle as a unit-cube transform.
ScaleTransform borehole_bounds();

/// n x p Latin hypercube: each column hits every stratum
/// [(k-1)/n, k/n) exactly once, uniformly within strata.
Eigen::MatrixXd latin_hypercube(int n, int p, Rng& rng);

enum class Generator { Sinusoid, Borehole, ExternalCsv };

struct ExperimentConfig {
    Generator generator = Generator::Sinusoid;
    int n_train = 45;
    int n_test = 200;
    int n_reps = 20;
    std::vector<KernelFamily> methods = {KernelFamily::Isotropic, KernelFamily::Separable,
                                         KernelFamily::SIM};
    MCMCConfig mcmc;    // family is set per method by the harness
    PriorSpec priors;
    std::uint64_t seed = 0;
    /// 0-based design columns excluded from the fitted model (responses are
    /// still generated from the full input vector).
    std::vector<int> drop_columns;
    double noise_sd = 0.1;  // sinusoid only
    Dataset external;       // ExternalCsv source
    int threads = 0;        // 0 = hardware concurrency

    void validate() const;
};

/// Monte Carlo comparison: per replicate, draw fresh train/test data, fit
/// each method by MCMC, and score the joint mixture predictive on the test
/// set by sqrt Mahalanobis distance against the noise-free truth.
/// Replicates run concurrently on per-replicate substreams; failures are
/// logged, excluded, and counted.
ComparisonSummary monte_carlo_compare(const ExperimentConfig& config);

/// Inverted k-fold cross validation: train on each (small) fold, predict
/// its complement. config.n_reps random partitions are scored, giving
/// k * n_reps distances per method.
ComparisonSummary inverted_cv(const Dataset& data, int k, const ExperimentConfig& config);

}  // namespace gpsim

#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gpsim/posterior.hpp"
#include "gpsim/rng.hpp"

namespace gpsim {

/// Default RW-MVN proposal variance per component (diag(0.2)).
inline constexpr double kDefaultProposalVar = 0.2;
/// Inflation applied to the sample covariance by adapt_proposal.
inline constexpr double kAdaptInflation = 1.2;
/// Default pilot-run length used before adaptation.
inline constexpr int kPilotIterations = 2000;
/// Monte Carlo draws for orthant probabilities at p >= 3.
inline constexpr int kOrthantMcDraws = 100000;

struct MCMCConfig {
    int n_iter = 5000;
    int burn_in = 1000;
    int thin = 2;
    /// p x p SPD proposal covariance for beta; empty selects
    /// diag(kDefaultProposalVar) sized to the data.
    Eigen::MatrixXd sigma_beta;
    bool sign_flips = false;
    std::uint64_t seed = 0;
    /// Initial kernel parameter (beta, or theta for separable/isotropic);
    /// empty selects all components = 1/2.
    Eigen::VectorXd beta_init;
    double eta_init = 0.05;
    KernelFamily family = KernelFamily::SIM;
    /// Keep the kernel parameter fixed and sample the nugget only.
    bool fix_beta = false;

    void validate(Eigen::Index p) const;
};

struct ChainSample {
    Eigen::VectorXd beta;  // theta for separable/isotropic chains
    double eta = 0.0;
};

/// Stored posterior samples (after burn-in and thinning) with the
/// log-posterior trace and acceptance statistics.
struct Chain {
    KernelFamily family = KernelFamily::SIM;
    std::vector<ChainSample> samples;
    std::vector<double> log_post;
    double accept_beta = 0.0;
    double accept_eta = 0.0;
    long numerical_rejects = 0;  // singular/orthant failures treated as rejections

    std::size_t size() const { return samples.size(); }
    Eigen::Index p() const { return samples.empty() ? 0 : samples.front().beta.size(); }
    /// T x p matrix of parameter samples.
    Eigen::MatrixXd beta_matrix() const;
    std::vector<double> component(Eigen::Index j) const;
    std::vector<double> eta_series() const;
    KernelSpec spec_at(std::size_t t) const;
};

/// Sliding-window nugget proposal eta' ~ Unif[3 eta/4, 4 eta/3]; returns
/// (eta', log q(eta|eta') - log q(eta'|eta)) = (eta', log(eta/eta')).
std::pair<double, double> propose_eta(double eta, Rng& rng);

/// Memoized orthant probabilities for a fixed covariance.
class OrthantCache {
public:
    explicit OrthantCache(Eigen::MatrixXd sigma);
    double prob(const Eigen::VectorXi& signs);
    const Eigen::MatrixXd& sigma() const { return sigma_; }

private:
    Eigen::MatrixXd sigma_;
    std::map<std::vector<int>, double> cache_;
};

/// P(sign(Z) = signs) for Z ~ N_p(0, Sigma). Exact for p <= 2; plain Monte
/// Carlo (kOrthantMcDraws, deterministic per-call substream) for p >= 3
/// with a ~3-decimal accuracy target.
double orthant_probability(const Eigen::MatrixXd& sigma, const Eigen::VectorXi& signs);

/// RW-MVN proposal for beta. With sign_flips the proposal is the compound
/// beta' = s * b with s ~ sign(N_p(0, Sigma)) and b ~ N_p(beta, Sigma); the
/// returned log-q ratio then carries the orthant probabilities of the
/// forward and reverse sign patterns plus the Gaussian density asymmetry.
std::pair<Eigen::VectorXd, double> propose_beta(const Eigen::VectorXd& beta,
                                                const Eigen::MatrixXd& sigma_beta, bool sign_flips,
                                                Rng& rng);
std::pair<Eigen::VectorXd, double> propose_beta(const Eigen::VectorXd& beta, OrthantCache& orthants,
                                                bool sign_flips, Rng& rng);

/// Accept/reject with probability min(1, exp(delta_log_post + log_q_ratio)).
bool mh_accept(double delta_log_post, double log_q_ratio, Rng& rng);

/// Current position of a Metropolis-within-Gibbs sweep. corr_base caches
/// the no-nugget correlation entries for the current kernel parameter so
/// nugget-only proposals skip the kernel rebuild.
struct MHState {
    KernelSpec spec;
    LogPosteriorValue log_post;
    Eigen::MatrixXd corr_base;
};

struct StepCounters {
    long eta_proposed = 0;
    long eta_accepted = 0;
    long beta_proposed = 0;
    long beta_accepted = 0;
    long numerical_rejects = 0;
};

MHState init_state(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X, const PriorSpec& priors,
                   const MCMCConfig& config);

/// One sweep: a nugget sub-step then a kernel-parameter sub-step (RW-MVN
/// block for SIM, per-component sliding windows for separable/isotropic).
/// Singular or orthant failures reject the proposal and are counted; they
/// never abort the chain.
void mh_step(MHState& state, const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
             const PriorSpec& priors, const MCMCConfig& config, OrthantCache& orthants, Rng& rng,
             StepCounters& counters);

/// Runs the sampler; deterministic given config.seed. Stores every thin-th
/// sweep after burn-in.
Chain run_chain(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X, const PriorSpec& priors,
                const MCMCConfig& config);

/// Sample covariance of the sign-reconciled beta samples, inflated by
/// kAdaptInflation and floored to PD. Falls back to diag(0.2) with a
/// warning when the covariance is degenerate.
Eigen::MatrixXd adapt_proposal(const Chain& chain);

/// T / (1 + 2 sum of leading positive autocorrelations), clamped to [1, T].
double effective_sample_size(const std::vector<double>& series);

}  // namespace gpsim

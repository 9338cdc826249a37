#include "gpsim/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace gpsim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string pattern_string(const Eigen::VectorXi& signs) {
    std::string s;
    for (Eigen::Index i = 0; i < signs.size(); ++i) s += signs(i) >= 0 ? '+' : '-';
    return s;
}

int sgn(double x) { return x < 0.0 ? -1 : 1; }

Eigen::MatrixXd chol_lower(const Eigen::MatrixXd& sigma, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw SingularMatrixError(std::string(what) + ": covariance not positive definite");
    }
    return llt.matrixL();
}

// Quadratic form v' Sigma^{-1} v given the lower Cholesky factor.
double quad_through(const Eigen::MatrixXd& L, const Eigen::VectorXd& v) {
    return L.triangularView<Eigen::Lower>().solve(v).squaredNorm();
}

// Evaluate the log posterior for `spec` reusing precomputed no-nugget
// correlation entries when provided.
LogPosteriorValue eval_log_post(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                                const KernelSpec& spec, const PriorSpec& priors,
                                const Eigen::MatrixXd* corr_base) {
    LogPosteriorValue v;
    v.log_prior = log_prior(spec, priors);
    if (!std::isfinite(v.log_prior)) {
        v.log_marginal_lik = 0.0;
        v.total = kNegInf;
        return v;
    }
    CorrMatrix K;
    if (corr_base != nullptr) {
        Eigen::MatrixXd entries = *corr_base;
        entries.diagonal().array() += spec.eta;
        K = corr_from_entries(std::move(entries), spec.describe());
    } else {
        K = build_corr_matrix(X, spec);
    }
    v.log_marginal_lik = log_marginal_likelihood(Y, K, priors.a_sigma, priors.b_sigma);
    v.total = v.log_prior + v.log_marginal_lik;
    return v;
}

// No-nugget correlation entries for the spec's current parameter.
Eigen::MatrixXd base_entries(const Eigen::MatrixXd& X, const KernelSpec& spec) {
    Eigen::MatrixXd base = corr_entries(X, spec);
    base.diagonal().array() -= spec.eta;
    return base;
}

}  // namespace

void MCMCConfig::validate(Eigen::Index p) const {
    if (n_iter <= 0) throw std::invalid_argument("MCMCConfig: n_iter must be positive");
    if (burn_in < 0 || burn_in >= n_iter) {
        throw std::invalid_argument("MCMCConfig: burn_in must satisfy 0 <= burn_in < n_iter");
    }
    if (thin <= 0) throw std::invalid_argument("MCMCConfig: thin must be positive");
    if (!(eta_init > 0.0)) throw std::invalid_argument("MCMCConfig: eta_init must be positive");
    const Eigen::Index dim = family == KernelFamily::Isotropic ? 1 : p;
    if (beta_init.size() != 0 && beta_init.size() != dim) {
        throw std::invalid_argument("MCMCConfig: beta_init length mismatch");
    }
    if (sigma_beta.size() != 0 && (sigma_beta.rows() != dim || sigma_beta.cols() != dim)) {
        throw std::invalid_argument("MCMCConfig: sigma_beta size mismatch");
    }
}

Eigen::MatrixXd Chain::beta_matrix() const {
    Eigen::MatrixXd B(static_cast<Eigen::Index>(samples.size()), p());
    for (std::size_t t = 0; t < samples.size(); ++t) {
        B.row(static_cast<Eigen::Index>(t)) = samples[t].beta.transpose();
    }
    return B;
}

std::vector<double> Chain::component(Eigen::Index j) const {
    std::vector<double> v(samples.size());
    for (std::size_t t = 0; t < samples.size(); ++t) v[t] = samples[t].beta(j);
    return v;
}

std::vector<double> Chain::eta_series() const {
    std::vector<double> v(samples.size());
    for (std::size_t t = 0; t < samples.size(); ++t) v[t] = samples[t].eta;
    return v;
}

KernelSpec Chain::spec_at(std::size_t t) const {
    const ChainSample& s = samples.at(t);
    return KernelSpec::from_param(family, s.beta, s.eta);
}

std::pair<double, double> propose_eta(double eta, Rng& rng) {
    if (!(eta > 0.0)) throw std::invalid_argument("propose_eta: eta must be positive");
    const double eta_prime = rng.uniform(0.75 * eta, eta * 4.0 / 3.0);
    // window width is 7 eta / 12, so the ratio of proposal densities is eta/eta'
    return {eta_prime, std::log(eta / eta_prime)};
}

OrthantCache::OrthantCache(Eigen::MatrixXd sigma) : sigma_(std::move(sigma)) {}

double OrthantCache::prob(const Eigen::VectorXi& signs) {
    std::vector<int> key(signs.data(), signs.data() + signs.size());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double p = orthant_probability(sigma_, signs);
    cache_.emplace(std::move(key), p);
    return p;
}

double orthant_probability(const Eigen::MatrixXd& sigma, const Eigen::VectorXi& signs) {
    const Eigen::Index p = sigma.rows();
    if (p < 1 || sigma.cols() != p || signs.size() != p) {
        throw std::invalid_argument("orthant_probability: dimension mismatch");
    }
    if (p == 1) {
        if (!(sigma(0, 0) > 0.0)) {
            throw SingularMatrixError("orthant_probability: covariance not positive definite");
        }
        return 0.5;
    }
    if (p == 2) {
        const double denom = std::sqrt(sigma(0, 0) * sigma(1, 1));
        if (!(denom > 0.0) || !(sigma(0, 0) > 0.0)) {
            throw SingularMatrixError("orthant_probability: covariance not positive definite");
        }
        const double rho = std::clamp(sigma(0, 1) / denom, -1.0, 1.0);
        const double rho_adj = signs(0) * signs(1) * rho;
        return 0.25 + std::asin(rho_adj) / (2.0 * std::numbers::pi);
    }
    const Eigen::MatrixXd L = chol_lower(sigma, "orthant_probability");
    // deterministic per-call substream keyed off the inputs
    std::uint64_t key = 0x6f727468616e7470ULL;
    for (Eigen::Index i = 0; i < p; ++i) {
        key = mix64(key ^ static_cast<std::uint64_t>(signs(i) >= 0 ? 1 : 2));
        for (Eigen::Index j = 0; j <= i; ++j) {
            std::uint64_t bits = 0;
            const double v = sigma(i, j);
            static_assert(sizeof(bits) == sizeof(v));
            std::memcpy(&bits, &v, sizeof(bits));
            key = mix64(key ^ bits);
        }
    }
    Rng rng(key);
    long hits = 0;
    for (int d = 0; d < kOrthantMcDraws; ++d) {
        const Eigen::VectorXd z = L * rng.normal_vector(p);
        bool match = true;
        for (Eigen::Index i = 0; i < p; ++i) {
            if (sgn(z(i)) != (signs(i) >= 0 ? 1 : -1)) {
                match = false;
                break;
            }
        }
        if (match) ++hits;
    }
    if (hits == 0) {
        throw OrthantError("orthant_probability: no Monte Carlo hits for sign pattern " +
                           pattern_string(signs));
    }
    return static_cast<double>(hits) / kOrthantMcDraws;
}

std::pair<Eigen::VectorXd, double> propose_beta(const Eigen::VectorXd& beta,
                                                const Eigen::MatrixXd& sigma_beta, bool sign_flips,
                                                Rng& rng) {
    OrthantCache cache(sigma_beta);
    return propose_beta(beta, cache, sign_flips, rng);
}

std::pair<Eigen::VectorXd, double> propose_beta(const Eigen::VectorXd& beta, OrthantCache& orthants,
                                                bool sign_flips, Rng& rng) {
    const Eigen::MatrixXd& sigma = orthants.sigma();
    const Eigen::Index p = beta.size();
    if (sigma.rows() != p || sigma.cols() != p) {
        throw std::invalid_argument("propose_beta: sigma_beta size mismatch");
    }
    const Eigen::MatrixXd L = chol_lower(sigma, "propose_beta");
    if (!sign_flips) {
        return {beta + L * rng.normal_vector(p), 0.0};
    }
    // Compound proposal beta' = s * b. The reverse move regenerates beta
    // through the pattern s~ = sign(b) * sign(beta) with Gaussian point
    // b~ = s~ * beta, which pairs the two paths one-to-one.
    const Eigen::VectorXd z = L * rng.normal_vector(p);
    const Eigen::VectorXd b = beta + L * rng.normal_vector(p);
    Eigen::VectorXi s(p), s_rev(p);
    Eigen::VectorXd beta_prime(p), b_rev(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        s(j) = sgn(z(j));
        beta_prime(j) = s(j) * b(j);
        s_rev(j) = sgn(b(j)) * sgn(beta(j));
        b_rev(j) = s_rev(j) * beta(j);
    }
    const double fwd = std::log(orthants.prob(s)) - 0.5 * quad_through(L, b - beta);
    const double rev = std::log(orthants.prob(s_rev)) - 0.5 * quad_through(L, b_rev - beta_prime);
    return {beta_prime, rev - fwd};
}

bool mh_accept(double delta_log_post, double log_q_ratio, Rng& rng) {
    const double log_alpha = delta_log_post + log_q_ratio;
    if (std::isnan(log_alpha)) return false;
    if (log_alpha >= 0.0) {
        rng.uniform_pos();  // keep the draw count per decision fixed
        return true;
    }
    return std::log(rng.uniform_pos()) < log_alpha;
}

MHState init_state(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X, const PriorSpec& priors,
                   const MCMCConfig& config) {
    const Eigen::Index p = X.cols();
    config.validate(p);
    priors.validate();

    const Eigen::Index dim = config.family == KernelFamily::Isotropic ? 1 : p;
    Eigen::VectorXd init = config.beta_init.size() != 0
                               ? config.beta_init
                               : Eigen::VectorXd::Constant(dim, 0.5);
    MHState state;
    state.spec = KernelSpec::from_param(config.family, init, config.eta_init);
    state.corr_base = base_entries(X, state.spec);
    state.log_post = eval_log_post(Y, X, state.spec, priors, &state.corr_base);
    if (!std::isfinite(state.log_post.total)) {
        throw std::invalid_argument("init_state: initial state has zero posterior density");
    }
    return state;
}

void mh_step(MHState& state, const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
             const PriorSpec& priors, const MCMCConfig& config, OrthantCache& orthants, Rng& rng,
             StepCounters& counters) {
    // nugget sub-step; the kernel part of the matrix is unchanged
    {
        ++counters.eta_proposed;
        const auto [eta_prime, lqr] = propose_eta(state.spec.eta, rng);
        if (eta_prime >= kEtaFloor) {
            KernelSpec prop = state.spec;
            prop.eta = eta_prime;
            try {
                const LogPosteriorValue lp = eval_log_post(Y, X, prop, priors, &state.corr_base);
                if (std::isfinite(lp.total) &&
                    mh_accept(lp.total - state.log_post.total, lqr, rng)) {
                    state.spec = prop;
                    state.log_post = lp;
                    ++counters.eta_accepted;
                }
            } catch (const SingularMatrixError&) {
                ++counters.numerical_rejects;
            }
        }
    }

    if (config.fix_beta) return;

    // kernel-parameter sub-step
    ++counters.beta_proposed;
    KernelSpec prop = state.spec;
    double lqr = 0.0;
    try {
        if (config.family == KernelFamily::SIM) {
            auto [beta_prime, q] = propose_beta(state.spec.beta, orthants, config.sign_flips, rng);
            prop.beta = std::move(beta_prime);
            lqr = q;
        } else {
            // sliding-window block update keeps every component positive
            for (Eigen::Index k = 0; k < prop.theta.size(); ++k) {
                const auto [tk, qk] = propose_eta(state.spec.theta(k), rng);
                prop.theta(k) = tk;
                lqr += qk;
            }
        }
        const LogPosteriorValue lp = eval_log_post(Y, X, prop, priors, nullptr);
        if (std::isfinite(lp.total) && mh_accept(lp.total - state.log_post.total, lqr, rng)) {
            state.spec = std::move(prop);
            state.log_post = lp;
            state.corr_base = base_entries(X, state.spec);
            ++counters.beta_accepted;
        }
    } catch (const SingularMatrixError&) {
        ++counters.numerical_rejects;
    } catch (const OrthantError&) {
        ++counters.numerical_rejects;
    }
}

Chain run_chain(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X, const PriorSpec& priors,
                const MCMCConfig& config) {
    const Eigen::Index p = X.cols();
    if (Y.size() != X.rows()) throw std::invalid_argument("run_chain: X/Y size mismatch");
    MHState state = init_state(Y, X, priors, config);

    const Eigen::Index dim = state.spec.param().size();
    Eigen::MatrixXd sigma = config.sigma_beta.size() != 0
                                ? config.sigma_beta
                                : Eigen::MatrixXd(kDefaultProposalVar *
                                                  Eigen::MatrixXd::Identity(dim, dim));
    OrthantCache orthants(std::move(sigma));
    Rng rng(config.seed);
    StepCounters counters;

    Chain chain;
    chain.family = config.family;
    const int stored = (config.n_iter - config.burn_in) / config.thin;
    chain.samples.reserve(static_cast<std::size_t>(std::max(stored, 0)));

    for (int i = 1; i <= config.n_iter; ++i) {
        mh_step(state, Y, X, priors, config, orthants, rng, counters);
        if (i > config.burn_in && (i - config.burn_in) % config.thin == 0) {
            chain.samples.push_back({state.spec.param(), state.spec.eta});
            chain.log_post.push_back(state.log_post.total);
        }
    }
    chain.accept_eta =
        counters.eta_proposed > 0 ? double(counters.eta_accepted) / counters.eta_proposed : 0.0;
    chain.accept_beta =
        counters.beta_proposed > 0 ? double(counters.beta_accepted) / counters.beta_proposed : 0.0;
    chain.numerical_rejects = counters.numerical_rejects;
    (void)p;
    return chain;
}

double effective_sample_size(const std::vector<double>& series) {
    const std::size_t T = series.size();
    if (T < 10) throw std::invalid_argument("effective_sample_size: need at least 10 points");
    const double Td = static_cast<double>(T);
    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= Td;
    double gamma0 = 0.0;
    for (double x : series) gamma0 += (x - mean) * (x - mean);
    gamma0 /= Td;
    if (!(gamma0 > 0.0)) return 1.0;  // constant series

    double acf_sum = 0.0;
    for (std::size_t k = 1; k < T; ++k) {
        double g = 0.0;
        for (std::size_t t = 0; t + k < T; ++t) g += (series[t] - mean) * (series[t + k] - mean);
        g /= Td;
        const double rho = g / gamma0;
        if (rho <= 0.0) break;  // initial positive sequence truncation
        acf_sum += rho;
    }
    return std::clamp(Td / (1.0 + 2.0 * acf_sum), 1.0, Td);
}

}  // namespace gpsim

#include "gpsim/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace gpsim {

namespace {

struct FitSolve {
    CorrMatrix K;
    Eigen::VectorXd half_y;  // L^{-1} Y
    double quad = 0.0;       // Y' K^{-1} Y
};

FitSolve solve_fit(const Eigen::VectorXd& Y, const Eigen::MatrixXd& X, const KernelSpec& spec) {
    if (Y.size() != X.rows()) throw std::invalid_argument("predictive: X/Y size mismatch");
    FitSolve f;
    f.K = build_corr_matrix(X, spec);
    f.half_y = f.K.half_solve(Y);
    f.quad = f.half_y.squaredNorm();
    return f;
}

double predictive_dof(Eigen::Index n, const PriorSpec& priors) {
    if (n <= 1) throw std::invalid_argument("predictive: need n > 1");
    return priors.a_sigma + static_cast<double>(n) - 1.0;
}

// Per-sample pointwise predictive over all rows of Xstar.
void pointwise_for_spec(const Eigen::MatrixXd& Xstar, const Eigen::VectorXd& Y,
                        const Eigen::MatrixXd& X, const KernelSpec& spec, const PriorSpec& priors,
                        PredictOptions opts, Eigen::VectorXd& mean_out,
                        Eigen::VectorXd& scale_out) {
    const FitSolve f = solve_fit(Y, X, spec);
    const Eigen::MatrixXd kx = cross_corr_matrix(Xstar, X, spec);
    const Eigen::MatrixXd A = f.K.half_solve(kx.transpose());  // n x N
    mean_out = A.transpose() * f.half_y;
    const double s2 = (priors.b_sigma + f.quad) / predictive_dof(Y.size(), priors);
    const double kxx = opts.latent ? 1.0 : 1.0 + spec.eta;
    scale_out = (kxx - A.colwise().squaredNorm().transpose().array()).max(0.0).matrix() * s2;
}

}  // namespace

PredictiveT predictive(const Eigen::VectorXd& xstar, const Eigen::VectorXd& Y,
                       const Eigen::MatrixXd& X, const KernelSpec& spec, const PriorSpec& priors,
                       PredictOptions opts) {
    PredictiveT out = joint_predictive(xstar.transpose(), Y, X, spec, priors, opts);
    return out;
}

PredictiveT joint_predictive(const Eigen::MatrixXd& Xstar, const Eigen::VectorXd& Y,
                             const Eigen::MatrixXd& X, const KernelSpec& spec,
                             const PriorSpec& priors, PredictOptions opts) {
    if (Xstar.rows() < 1) throw std::invalid_argument("joint_predictive: empty prediction set");
    priors.validate();
    const FitSolve f = solve_fit(Y, X, spec);
    const Eigen::MatrixXd kx = cross_corr_matrix(Xstar, X, spec);
    const Eigen::MatrixXd A = f.K.half_solve(kx.transpose());  // n x N

    PredictiveT out;
    out.dof = predictive_dof(Y.size(), priors);
    out.mean = A.transpose() * f.half_y;

    Eigen::MatrixXd Kss = corr_entries(Xstar, spec);
    if (opts.latent) Kss.diagonal().array() -= spec.eta;
    const double s2 = (priors.b_sigma + f.quad) / out.dof;
    out.scale = s2 * (Kss - A.transpose() * A);
    out.scale = 0.5 * (out.scale + out.scale.transpose());  // keep exact symmetry
    return out;
}

Eigen::MatrixXd sample_paths(const PredictiveT& pred, int n_draws, Rng& rng) {
    if (n_draws <= 0) throw std::invalid_argument("sample_paths: n_draws must be positive");
    if (pred.dof <= 2.0) {
        warn("sample_paths: dof <= 2, predictive covariance is undefined");
    }
    const Eigen::Index N = pred.mean.size();
    const CorrMatrix S = corr_from_entries(pred.scale, "predictive scale");
    Eigen::MatrixXd draws(n_draws, N);
    for (int d = 0; d < n_draws; ++d) {
        const double w = rng.chi_squared(pred.dof);
        draws.row(d) = (pred.mean + S.chol * rng.normal_vector(N) * std::sqrt(pred.dof / w))
                           .transpose();
    }
    return draws;
}

MixturePrediction mixture_predict(const Eigen::MatrixXd& Xstar, const Eigen::VectorXd& Y,
                                  const Eigen::MatrixXd& X, const Chain& chain,
                                  const PriorSpec& priors, const std::vector<double>& quantiles,
                                  PredictOptions opts, int draws_per_sample, std::uint64_t seed) {
    if (chain.size() == 0) throw std::invalid_argument("mixture_predict: empty chain");
    for (double q : quantiles) {
        if (!(q > 0.0 && q < 1.0)) {
            throw std::invalid_argument("mixture_predict: quantile probs must lie in (0,1)");
        }
    }
    const Eigen::Index N = Xstar.rows();
    const std::size_t T = chain.size();
    const double dof = predictive_dof(Y.size(), priors);

    Eigen::MatrixXd mu(N, static_cast<Eigen::Index>(T));
    Eigen::MatrixXd sc(N, static_cast<Eigen::Index>(T));
    for (std::size_t t = 0; t < T; ++t) {
        Eigen::VectorXd m, s;
        pointwise_for_spec(Xstar, Y, X, chain.spec_at(t), priors, opts, m, s);
        mu.col(static_cast<Eigen::Index>(t)) = m;
        sc.col(static_cast<Eigen::Index>(t)) = s;
    }

    MixturePrediction out;
    out.probs = quantiles;
    out.mean = mu.rowwise().mean();
    if (dof > 2.0) {
        const Eigen::VectorXd mean_var = sc.rowwise().mean() * (dof / (dof - 2.0));
        const Eigen::VectorXd var_mean =
            (mu.colwise() - out.mean).array().square().rowwise().mean();
        out.sd = (mean_var + var_mean).cwiseMax(0.0).cwiseSqrt();
    } else {
        warn("mixture_predict: dof <= 2, reporting NaN sd");
        out.sd = Eigen::VectorXd::Constant(N, std::numeric_limits<double>::quiet_NaN());
    }

    if (chain.family == KernelFamily::SIM) {
        out.mean_index = posterior_indices(Xstar, chain).mean;
    } else {
        out.mean_index = Eigen::VectorXd::Zero(N);
    }

    out.quantiles.resize(N, static_cast<Eigen::Index>(quantiles.size()));
    if (!quantiles.empty()) {
        const Rng base(seed);
        std::vector<double> pool(T * static_cast<std::size_t>(draws_per_sample));
        for (Eigen::Index i = 0; i < N; ++i) {
            std::size_t w = 0;
            for (std::size_t t = 0; t < T; ++t) {
                Rng sub = base.substream((static_cast<std::uint64_t>(t) << 32) ^
                                         static_cast<std::uint64_t>(i));
                const double m = mu(i, static_cast<Eigen::Index>(t));
                const double s = std::sqrt(std::max(sc(i, static_cast<Eigen::Index>(t)), 0.0));
                for (int d = 0; d < draws_per_sample; ++d) {
                    const double chi = sub.chi_squared(dof);
                    pool[w++] = m + s * sub.normal() * std::sqrt(dof / chi);
                }
            }
            std::sort(pool.begin(), pool.end());
            for (std::size_t qi = 0; qi < quantiles.size(); ++qi) {
                // type-7 quantile on the sorted draws
                const double h = quantiles[qi] * (static_cast<double>(pool.size()) - 1.0);
                const std::size_t lo = static_cast<std::size_t>(std::floor(h));
                const std::size_t hi = std::min(lo + 1, pool.size() - 1);
                const double frac = h - static_cast<double>(lo);
                out.quantiles(i, static_cast<Eigen::Index>(qi)) =
                    pool[lo] + frac * (pool[hi] - pool[lo]);
            }
        }
    }
    return out;
}

MixtureMoments mixture_joint_moments(const Eigen::MatrixXd& Xstar, const Eigen::VectorXd& Y,
                                     const Eigen::MatrixXd& X, const Chain& chain,
                                     const PriorSpec& priors, PredictOptions opts) {
    if (chain.size() == 0) throw std::invalid_argument("mixture_joint_moments: empty chain");
    const double dof = predictive_dof(Y.size(), priors);
    if (dof <= 2.0) {
        throw std::invalid_argument("mixture_joint_moments: dof <= 2, covariance undefined");
    }
    const Eigen::Index N = Xstar.rows();
    const std::size_t T = chain.size();

    Eigen::VectorXd mean_sum = Eigen::VectorXd::Zero(N);
    Eigen::MatrixXd outer_sum = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd cov_sum = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t t = 0; t < T; ++t) {
        const PredictiveT pred = joint_predictive(Xstar, Y, X, chain.spec_at(t), priors, opts);
        mean_sum += pred.mean;
        outer_sum.selfadjointView<Eigen::Lower>().rankUpdate(pred.mean);
        cov_sum += pred.scale * (dof / (dof - 2.0));
    }
    MixtureMoments out;
    out.dof = dof;
    out.mean = mean_sum / static_cast<double>(T);
    Eigen::MatrixXd outer = Eigen::MatrixXd(outer_sum.selfadjointView<Eigen::Lower>()) /
                            static_cast<double>(T);
    out.cov = cov_sum / static_cast<double>(T) + outer - out.mean * out.mean.transpose();
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    return out;
}

PosteriorIndices posterior_indices(const Eigen::MatrixXd& Xstar, const Chain& chain) {
    if (chain.family != KernelFamily::SIM) {
        throw std::invalid_argument("posterior_indices: chain is not a SIM fit");
    }
    if (chain.size() == 0) throw std::invalid_argument("posterior_indices: empty chain");
    if (Xstar.cols() != chain.p()) {
        throw std::invalid_argument("posterior_indices: dimension mismatch");
    }
    PosteriorIndices out;
    out.per_sample = chain.beta_matrix() * Xstar.transpose();  // T x N
    out.mean = out.per_sample.colwise().mean();
    return out;
}

}  // namespace gpsim

#include "gpsim/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace gpsim {

namespace {

// Per-sample pointwise (mu, scale) over all candidates; shared by both
// criteria so chain sweeps stay O(T) matrix factorizations.
void mixture_mu_scale(const Eigen::MatrixXd& Xstar, const Eigen::VectorXd& Y,
                      const Eigen::MatrixXd& X, const Chain& chain, const PriorSpec& priors,
                      PredictOptions opts, Eigen::MatrixXd& mu, Eigen::MatrixXd& sc, double& dof) {
    if (chain.size() == 0) throw std::invalid_argument("design scores: empty chain");
    const Eigen::Index N = Xstar.rows();
    const auto T = static_cast<Eigen::Index>(chain.size());
    mu.resize(N, T);
    sc.resize(N, T);
    dof = priors.a_sigma + static_cast<double>(Y.size()) - 1.0;
    for (Eigen::Index t = 0; t < T; ++t) {
        const PredictiveT pred =
            joint_predictive(Xstar, Y, X, chain.spec_at(static_cast<std::size_t>(t)), priors, opts);
        mu.col(t) = pred.mean;
        sc.col(t) = pred.scale.diagonal().cwiseMax(0.0);
    }
}

}  // namespace

std::string criterion_name(Criterion c) {
    return c == Criterion::ALM ? "alm" : "ei";
}

double student_t_ei(double f_min, double mu, double sigma, double dof) {
    if (!(dof > 1.0)) throw std::invalid_argument("student_t_ei: needs dof > 1");
    if (!(sigma >= 0.0)) throw std::invalid_argument("student_t_ei: negative sigma");
    if (sigma == 0.0) return std::max(f_min - mu, 0.0);
    const boost::math::students_t dist(dof);
    const double z = (f_min - mu) / sigma;
    const double ei = (f_min - mu) * boost::math::cdf(dist, z) +
                      sigma * (dof + z * z) / (dof - 1.0) * boost::math::pdf(dist, z);
    return std::max(ei, 0.0);
}

double alm_score(const Eigen::VectorXd& xstar, const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                 const Chain& chain, const PriorSpec& priors, PredictOptions opts) {
    Eigen::MatrixXd mu, sc;
    double dof = 0.0;
    mixture_mu_scale(xstar.transpose(), Y, X, chain, priors, opts, mu, sc, dof);
    if (!(dof > 2.0)) throw std::invalid_argument("alm_score: needs dof > 2");
    const double mean_var = sc.row(0).mean() * dof / (dof - 2.0);
    const double mbar = mu.row(0).mean();
    const double var_mean = (mu.row(0).array() - mbar).square().mean();
    return mean_var + var_mean;
}

double expected_improvement(const Eigen::VectorXd& xstar, double f_min, const Eigen::VectorXd& Y,
                            const Eigen::MatrixXd& X, const Chain& chain, const PriorSpec& priors,
                            PredictOptions opts) {
    Eigen::MatrixXd mu, sc;
    double dof = 0.0;
    mixture_mu_scale(xstar.transpose(), Y, X, chain, priors, opts, mu, sc, dof);
    double ei = 0.0;
    for (Eigen::Index t = 0; t < mu.cols(); ++t) {
        ei += student_t_ei(f_min, mu(0, t), std::sqrt(sc(0, t)), dof);
    }
    return ei / static_cast<double>(mu.cols());
}

CandidateScores rank_candidates(const Eigen::MatrixXd& candidates, Criterion criterion,
                                double f_min, const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                                const Chain& chain, const PriorSpec& priors, PredictOptions opts) {
    if (candidates.rows() < 1) throw std::invalid_argument("rank_candidates: empty candidate set");
    Eigen::MatrixXd mu, sc;
    double dof = 0.0;
    mixture_mu_scale(candidates, Y, X, chain, priors, opts, mu, sc, dof);

    const Eigen::Index N = candidates.rows();
    Eigen::VectorXd scores(N);
    if (criterion == Criterion::ALM) {
        if (!(dof > 2.0)) throw std::invalid_argument("alm_score: needs dof > 2");
        for (Eigen::Index i = 0; i < N; ++i) {
            const double mbar = mu.row(i).mean();
            scores(i) = sc.row(i).mean() * dof / (dof - 2.0) +
                        (mu.row(i).array() - mbar).square().mean();
        }
    } else {
        for (Eigen::Index i = 0; i < N; ++i) {
            double ei = 0.0;
            for (Eigen::Index t = 0; t < mu.cols(); ++t) {
                ei += student_t_ei(f_min, mu(i, t), std::sqrt(sc(i, t)), dof);
            }
            scores(i) = ei / static_cast<double>(mu.cols());
        }
    }

    std::vector<int> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores(a) > scores(b); });

    CandidateScores out;
    out.criterion = criterion;
    out.order = order;
    out.candidates.resize(N, candidates.cols());
    out.scores.resize(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        out.candidates.row(i) = candidates.row(order[static_cast<std::size_t>(i)]);
        out.scores(i) = scores(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace gpsim

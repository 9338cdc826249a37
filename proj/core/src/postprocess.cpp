#include "gpsim/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace gpsim {

namespace {

void require_sim(const Chain& chain, const char* what) {
    if (chain.family != KernelFamily::SIM) {
        throw std::invalid_argument(std::string(what) + ": chain is not a SIM fit");
    }
    if (chain.size() == 0) {
        throw std::invalid_argument(std::string(what) + ": empty chain");
    }
}

ReconciledChain apply_flips(const Chain& chain, std::vector<char> flips, ReconcileMethod method) {
    ReconciledChain out;
    out.chain = chain;
    out.method = method;
    for (std::size_t t = 0; t < chain.size(); ++t) {
        if (flips[t]) out.chain.samples[t].beta = -out.chain.samples[t].beta;
    }
    out.flips = std::move(flips);
    return out;
}

// mean/sd ratio of |beta_j| per component; large means reliably nonzero
Eigen::VectorXd magnitude_ratios(const Chain& chain) {
    const Eigen::MatrixXd A = chain.beta_matrix().cwiseAbs();
    const Eigen::Index T = A.rows();
    Eigen::VectorXd ratio(A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double m = A.col(j).mean();
        const double sd = std::sqrt((A.col(j).array() - m).square().sum() /
                                    std::max<Eigen::Index>(T - 1, 1));
        ratio(j) = sd > 1e-300 ? m / sd : (m > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    }
    return ratio;
}

std::vector<char> flips_for_component(const Chain& chain, Eigen::Index j) {
    std::vector<char> flips(chain.size(), 0);
    for (std::size_t t = 0; t < chain.size(); ++t) {
        if (chain.samples[t].beta(j) < 0.0) flips[t] = 1;
    }
    return flips;
}

}  // namespace

std::string reconcile_method_name(ReconcileMethod m) {
    switch (m) {
        case ReconcileMethod::IndexCluster: return "index";
        case ReconcileMethod::AnchorComponent: return "anchor";
        case ReconcileMethod::CovarianceSign: return "covariance";
    }
    return "?";
}

ReconciledChain reconcile_by_index(const Chain& chain, const Eigen::MatrixXd& reference) {
    require_sim(chain, "reconcile_by_index");
    if (reference.rows() < 1 || reference.cols() != chain.p()) {
        throw std::invalid_argument("reconcile_by_index: bad reference matrix");
    }
    const Eigen::MatrixXd B = chain.beta_matrix();          // T x p
    const Eigen::VectorXd m = (B * reference.transpose()).rowwise().mean();  // mean index per sample

    long pos = 0, neg = 0;
    for (Eigen::Index t = 0; t < m.size(); ++t) {
        if (m(t) >= kClusterTol) ++pos;
        else if (m(t) <= -kClusterTol) ++neg;
    }
    const int majority = pos >= neg ? 1 : -1;

    std::vector<char> flips(chain.size(), 0);
    std::vector<int> ambiguous;
    for (Eigen::Index t = 0; t < m.size(); ++t) {
        if (std::abs(m(t)) < kClusterTol) {
            ambiguous.push_back(static_cast<int>(t));
            continue;
        }
        if ((m(t) > 0.0 ? 1 : -1) != majority) flips[static_cast<std::size_t>(t)] = 1;
    }
    if (!ambiguous.empty()) {
        warn("reconcile_by_index: " + std::to_string(ambiguous.size()) +
             " sample(s) with |mean index| < cluster tolerance left unflipped");
    }
    ReconciledChain out = apply_flips(chain, std::move(flips), ReconcileMethod::IndexCluster);
    out.ambiguous = std::move(ambiguous);
    return out;
}

ReconciledChain reconcile_by_anchor(const Chain& chain) {
    require_sim(chain, "reconcile_by_anchor");
    const Eigen::VectorXd ratio = magnitude_ratios(chain);
    Eigen::Index anchor = 0;
    const double best = ratio.maxCoeff(&anchor);
    if (!(best >= 1.0)) {
        throw std::runtime_error(
            "reconcile_by_anchor: every component straddles zero; use the index heuristic");
    }
    return apply_flips(chain, flips_for_component(chain, anchor),
                       ReconcileMethod::AnchorComponent);
}

std::pair<std::vector<int>, std::vector<int>> covariance_sign_partition(
    const Eigen::MatrixXd& cov) {
    const Eigen::Index p = cov.rows();
    if (p < 1 || cov.cols() != p) {
        throw std::invalid_argument("covariance_sign_partition: square matrix required");
    }
    Eigen::VectorXd sd = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd corr = cov;
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            const double denom = sd(i) * sd(j);
            corr(i, j) = denom > 1e-300 ? cov(i, j) / denom : 0.0;
        }
    }
    // anchor row: the component most connected to the rest
    Eigen::Index anchor = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        const double mass = corr.row(j).cwiseAbs().sum() - std::abs(corr(j, j));
        if (mass > best) {
            best = mass;
            anchor = j;
        }
    }
    std::vector<int> with{static_cast<int>(anchor)}, against, undecided;
    for (Eigen::Index j = 0; j < p; ++j) {
        if (j == anchor) continue;
        const double c = corr(anchor, j);
        if (c > kPartitionCorrTol) with.push_back(static_cast<int>(j));
        else if (c < -kPartitionCorrTol) against.push_back(static_cast<int>(j));
        else undecided.push_back(static_cast<int>(j));
    }
    if (!against.empty() && !undecided.empty()) {
        throw std::runtime_error(
            "covariance_sign_partition: ambiguous partition, some covariance entries near zero");
    }
    // no opposite group means no mixing evidence: a single group
    if (against.empty()) {
        for (int j : undecided) with.push_back(j);
        std::sort(with.begin(), with.end());
    }
    return {with, against};
}

ReconciledChain reconcile_by_covariance(const Chain& chain) {
    require_sim(chain, "reconcile_by_covariance");
    if (chain.size() < static_cast<std::size_t>(chain.p()) + 1) {
        throw std::invalid_argument("reconcile_by_covariance: need at least p+1 samples");
    }
    const Eigen::MatrixXd B = chain.beta_matrix();
    const Eigen::RowVectorXd mean = B.colwise().mean();
    const Eigen::MatrixXd C =
        (B.rowwise() - mean).transpose() * (B.rowwise() - mean) / double(B.rows() - 1);

    auto [with, against] = covariance_sign_partition(C);
    const std::vector<int>& larger = with.size() >= against.size() ? with : against;

    // anchor on the most reliably nonzero component of the larger group
    const Eigen::VectorXd ratio = magnitude_ratios(chain);
    int anchor = larger.front();
    for (int j : larger) {
        if (ratio(j) > ratio(anchor)) anchor = j;
    }
    ReconciledChain out = apply_flips(chain, flips_for_component(chain, anchor),
                                      ReconcileMethod::CovarianceSign);
    return out;
}

Eigen::VectorXd point_estimate(const Chain& chain) {
    require_sim(chain, "point_estimate");
    const Eigen::Index p = chain.p();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
    for (const ChainSample& s : chain.samples) {
        const double norm = s.beta.norm();
        if (norm < 1e-12) {
            throw std::invalid_argument("point_estimate: chain contains a zero-norm beta sample");
        }
        const Eigen::VectorXd u = s.beta / norm;
        M.selfadjointView<Eigen::Lower>().rankUpdate(u);
    }
    M = Eigen::MatrixXd(M.selfadjointView<Eigen::Lower>()) / double(chain.size());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("point_estimate: eigendecomposition failed");
    }
    const Eigen::VectorXd evals = es.eigenvalues();  // ascending
    if (p > 1 && evals(p - 1) - evals(p - 2) < 1e-10) {
        throw std::runtime_error("point_estimate: top eigenvalues tie, direction undefined");
    }
    Eigen::VectorXd v = es.eigenvectors().col(p - 1);
    v.normalize();

    // orient along the reconciled majority
    Eigen::VectorXd ref = Eigen::VectorXd::Zero(p);
    try {
        const ReconciledChain rec = reconcile_by_anchor(chain);
        for (const ChainSample& s : rec.chain.samples) ref += s.beta / s.beta.norm();
    } catch (const std::exception&) {
        for (const ChainSample& s : chain.samples) ref += s.beta / s.beta.norm();
    }
    if (v.dot(ref) < 0.0) v = -v;
    return v;
}

std::vector<double> implied_theta(const Chain& chain) {
    require_sim(chain, "implied_theta");
    std::vector<double> theta(chain.size());
    for (std::size_t t = 0; t < chain.size(); ++t) {
        const double norm = chain.samples[t].beta.norm();
        if (norm < 1e-12) {
            throw std::invalid_argument("implied_theta: zero-norm beta sample at index " +
                                        std::to_string(t));
        }
        theta[t] = 1.0 / (norm * norm);
    }
    return theta;
}

// Declared in mcmc.hpp; lives here to reuse the sign-reconciliation step.
Eigen::MatrixXd adapt_proposal(const Chain& chain) {
    require_sim(chain, "adapt_proposal");
    const Eigen::Index p = chain.p();
    if (chain.size() < static_cast<std::size_t>(p) + 1) {
        throw std::invalid_argument("adapt_proposal: need at least p+1 samples");
    }
    const Eigen::MatrixXd fallback =
        kDefaultProposalVar * Eigen::MatrixXd::Identity(p, p);

    Chain oriented = chain;
    try {
        oriented = reconcile_by_anchor(chain).chain;
    } catch (const std::exception&) {
        warn("adapt_proposal: sign reconciliation failed, using raw samples");
    }
    const Eigen::MatrixXd B = oriented.beta_matrix();
    const Eigen::RowVectorXd mean = B.colwise().mean();
    Eigen::MatrixXd C =
        (B.rowwise() - mean).transpose() * (B.rowwise() - mean) / double(B.rows() - 1);
    if (!C.allFinite() || C.norm() < 1e-300) {
        warn("adapt_proposal: degenerate sample covariance, falling back to diag(0.2)");
        return fallback;
    }
    C *= kAdaptInflation;

    // PD floor
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success) {
        warn("adapt_proposal: eigendecomposition failed, falling back to diag(0.2)");
        return fallback;
    }
    Eigen::VectorXd evals = es.eigenvalues().cwiseMax(1e-8);
    return es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace gpsim

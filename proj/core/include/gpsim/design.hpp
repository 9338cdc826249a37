#pragma once

#include <vector>

#include <Eigen/Core>

#include "gpsim/predict.hpp"

namespace gpsim {

enum class Criterion { ALM, EI };

std::string criterion_name(Criterion c);

/// Candidates with their scores, sorted by descending score (ties keep the
/// original candidate order). order[i] is the original row of the i-th
/// ranked candidate.
struct CandidateScores {
    Eigen::MatrixXd candidates;
    Eigen::VectorXd scores;
    std::vector<int> order;
    Criterion criterion = Criterion::ALM;
};

/// Mixture predictive variance at xstar (active-learning score): mean of
/// per-sample variances plus the variance of per-sample means across the
/// chain. Requires dof > 2.
double alm_score(const Eigen::VectorXd& xstar, const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                 const Chain& chain, const PriorSpec& priors, PredictOptions opts = {});

/// Closed-form Student-t expected improvement for minimization,
///   EI = (f_min - mu) T_nu(z) + sigma (nu + z^2)/(nu - 1) t_nu(z),
/// z = (f_min - mu)/sigma. Requires dof > 1.
double student_t_ei(double f_min, double mu, double sigma, double dof);

/// Chain-averaged Student-t EI at xstar.
double expected_improvement(const Eigen::VectorXd& xstar, double f_min, const Eigen::VectorXd& Y,
                            const Eigen::MatrixXd& X, const Chain& chain, const PriorSpec& priors,
                            PredictOptions opts = {});

/// Score every candidate row and return them in descending-score order.
/// f_min is ignored for ALM.
CandidateScores rank_candidates(const Eigen::MatrixXd& candidates, Criterion criterion,
                                double f_min, const Eigen::VectorXd& Y, const Eigen::MatrixXd& X,
                                const Chain& chain, const PriorSpec& priors,
                                PredictOptions opts = {});

}  // namespace gpsim

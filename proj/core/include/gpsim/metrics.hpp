#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gpsim {

/// (y - mu)' Sigma^{-1} (y - mu) via Cholesky solve. Throws
/// SingularMatrixError when Sigma is not PD.
double mahalanobis(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                   const Eigen::MatrixXd& Sigma);

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

/// Linear-interpolation (type-7) quantile.
double quantile(std::vector<double> values, double prob);

struct SummaryStats {
    double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0;
};

SummaryStats six_number_summary(std::span<const double> values);

/// Per-method sqrt-Mahalanobis sequences from a comparison run plus their
/// six-number summaries, in method order.
struct ComparisonSummary {
    std::vector<std::string> methods;
    std::vector<std::vector<double>> sqrt_mah;
    std::vector<SummaryStats> summary;
    int failed_replicates = 0;

    void finalize();  // recompute summaries from the raw sequences
};

}  // namespace gpsim

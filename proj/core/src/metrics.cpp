#include "gpsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "gpsim/errors.hpp"

namespace gpsim {

double mahalanobis(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                   const Eigen::MatrixXd& Sigma) {
    const Eigen::Index n = y.size();
    if (mu.size() != n || Sigma.rows() != n || Sigma.cols() != n) {
        throw std::invalid_argument("mahalanobis: dimension mismatch");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(Sigma);
    if (llt.info() != Eigen::Success) {
        throw SingularMatrixError("mahalanobis: Sigma not positive definite");
    }
    return llt.matrixL().solve(y - mu).squaredNorm();
}

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
    if (y.size() == 0) throw std::invalid_argument("rmse: empty vectors");
    if (y.size() != yhat.size()) throw std::invalid_argument("rmse: length mismatch");
    return std::sqrt((y - yhat).squaredNorm() / static_cast<double>(y.size()));
}

double quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw std::invalid_argument("quantile: empty input");
    if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("quantile: prob out of [0,1]");
    std::sort(values.begin(), values.end());
    const double h = prob * (static_cast<double>(values.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

SummaryStats six_number_summary(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("six_number_summary: empty input");
    std::vector<double> v(values.begin(), values.end());
    SummaryStats s;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    s.q1 = quantile(v, 0.25);
    s.median = quantile(v, 0.5);
    s.q3 = quantile(v, 0.75);
    s.mean = 0.0;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    return s;
}

void ComparisonSummary::finalize() {
    summary.clear();
    summary.reserve(sqrt_mah.size());
    for (const auto& seq : sqrt_mah) summary.push_back(six_number_summary(seq));
}

}  // namespace gpsim

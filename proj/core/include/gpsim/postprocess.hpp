#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gpsim/mcmc.hpp"

namespace gpsim {

/// Mean indices closer to zero than this are flagged ambiguous by the
/// index-cluster heuristic and left unflipped.
inline constexpr double kClusterTol = 1e-3;
/// Correlations smaller than this are uninformative for the covariance
/// sign partition.
inline constexpr double kPartitionCorrTol = 0.05;

enum class ReconcileMethod { IndexCluster, AnchorComponent, CovarianceSign };

std::string reconcile_method_name(ReconcileMethod m);

/// Chain with per-sample sign flips applied; applying the recorded flips
/// again restores the original chain.
struct ReconciledChain {
    Chain chain;
    std::vector<char> flips;      // 1 = sample was negated
    ReconcileMethod method = ReconcileMethod::IndexCluster;
    std::vector<int> ambiguous;   // samples left alone by the index heuristic
};

/// Flip samples whose mean reference index X~ beta^(t) carries the minority
/// sign, so all mean indices share the majority sign.
ReconciledChain reconcile_by_index(const Chain& chain, const Eigen::MatrixXd& reference);

/// Flip samples so the most reliably nonzero component (largest
/// mean/sd ratio of |beta_j|) is positive throughout. Errors when every
/// component straddles zero (ratio < 1).
ReconciledChain reconcile_by_anchor(const Chain& chain);

/// Partition components into two sign groups from the sample covariance,
/// then anchor on the larger group.
ReconciledChain reconcile_by_covariance(const Chain& chain);

/// The partition step of the covariance heuristic, exposed for diagnostics:
/// splits components into (anchor-side, opposite-side) groups by the sign
/// of their covariance with the anchor row. Throws on an ambiguous
/// partition.
std::pair<std::vector<int>, std::vector<int>> covariance_sign_partition(const Eigen::MatrixXd& cov);

/// Unit-norm principal eigenvector of sum_t beta^(t) beta^(t)' over
/// normalized samples, oriented along the reconciled majority. Errors when
/// the top eigenvalues tie (direction undefined).
Eigen::VectorXd point_estimate(const Chain& chain);

/// Per-sample implied length-scale theta^(t) = 1 / ||beta^(t)||^2.
std::vector<double> implied_theta(const Chain& chain);

}  // namespace gpsim

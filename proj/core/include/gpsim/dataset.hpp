#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace gpsim {

/// Per-column affine map between raw input units and the unit cube.
struct ScaleTransform {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    static ScaleTransform identity(Eigen::Index p);
    /// Throws std::invalid_argument on degenerate bounds (hi <= lo).
    static ScaleTransform from_bounds(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

    Eigen::Index dim() const { return lo.size(); }
    Eigen::MatrixXd forward(const Eigen::MatrixXd& raw) const;
    Eigen::MatrixXd inverse(const Eigen::MatrixXd& unit) const;
    /// Transform restricted to a subset of columns (0-based, in order).
    ScaleTransform select(const std::vector<int>& keep) const;
};

/// Design/response pair with the scaling that maps X back to raw units.
/// X is kept in the unit cube. f_true holds noise-free responses for
/// synthetic data (empty otherwise).
struct Dataset {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    ScaleTransform transform;
    Eigen::VectorXd f_true;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index p() const { return X.cols(); }
};

/// Map raw inputs to the unit cube given per-column bounds; the returned
/// transform inverts the map for prediction requests in raw units.
std::pair<Eigen::MatrixXd, ScaleTransform> scale_to_unit_cube(
    const Eigen::MatrixXd& X_raw, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

/// Bounds inferred from column minima/maxima.
std::pair<Eigen::MatrixXd, ScaleTransform> scale_to_unit_cube(const Eigen::MatrixXd& X_raw);

/// Drop the listed 0-based columns from a matrix (benchmark drop-columns support).
Eigen::MatrixXd drop_columns(const Eigen::MatrixXd& X, const std::vector<int>& drop);
std::vector<int> kept_columns(Eigen::Index p, const std::vector<int>& drop);

}  // namespace gpsim

#include "gpsim/dataset.hpp"

#include <algorithm>
#include <stdexcept>

namespace gpsim {

ScaleTransform ScaleTransform::identity(Eigen::Index p) {
    ScaleTransform t;
    t.lo = Eigen::VectorXd::Zero(p);
    t.hi = Eigen::VectorXd::Ones(p);
    return t;
}

ScaleTransform ScaleTransform::from_bounds(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    if (lo.size() != hi.size()) {
        throw std::invalid_argument("ScaleTransform: lo/hi length mismatch");
    }
    for (Eigen::Index j = 0; j < lo.size(); ++j) {
        if (!(hi(j) > lo(j))) {
            throw std::invalid_argument("ScaleTransform: degenerate bounds in column " +
                                        std::to_string(j + 1));
        }
    }
    ScaleTransform t;
    t.lo = lo;
    t.hi = hi;
    return t;
}

Eigen::MatrixXd ScaleTransform::forward(const Eigen::MatrixXd& raw) const {
    if (raw.cols() != dim()) {
        throw std::invalid_argument("ScaleTransform::forward: column count mismatch");
    }
    Eigen::MatrixXd out = raw;
    out.rowwise() -= lo.transpose();
    out.array().rowwise() /= (hi - lo).transpose().array();
    return out;
}

Eigen::MatrixXd ScaleTransform::inverse(const Eigen::MatrixXd& unit) const {
    if (unit.cols() != dim()) {
        throw std::invalid_argument("ScaleTransform::inverse: column count mismatch");
    }
    Eigen::MatrixXd out = unit;
    out.array().rowwise() *= (hi - lo).transpose().array();
    out.rowwise() += lo.transpose();
    return out;
}

ScaleTransform ScaleTransform::select(const std::vector<int>& keep) const {
    ScaleTransform t;
    t.lo.resize(static_cast<Eigen::Index>(keep.size()));
    t.hi.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const int j = keep[i];
        if (j < 0 || j >= dim()) {
            throw std::invalid_argument("ScaleTransform::select: column out of range");
        }
        t.lo(static_cast<Eigen::Index>(i)) = lo(j);
        t.hi(static_cast<Eigen::Index>(i)) = hi(j);
    }
    return t;
}

std::pair<Eigen::MatrixXd, ScaleTransform> scale_to_unit_cube(
    const Eigen::MatrixXd& X_raw, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    auto t = ScaleTransform::from_bounds(lo, hi);
    return {t.forward(X_raw), t};
}

std::pair<Eigen::MatrixXd, ScaleTransform> scale_to_unit_cube(const Eigen::MatrixXd& X_raw) {
    if (X_raw.rows() < 2) {
        throw std::invalid_argument("scale_to_unit_cube: need at least 2 rows to infer bounds");
    }
    return scale_to_unit_cube(X_raw, X_raw.colwise().minCoeff(), X_raw.colwise().maxCoeff());
}

std::vector<int> kept_columns(Eigen::Index p, const std::vector<int>& drop) {
    std::vector<int> keep;
    keep.reserve(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
        if (std::find(drop.begin(), drop.end(), j) == drop.end()) keep.push_back(j);
    }
    if (keep.empty()) {
        throw std::invalid_argument("drop_columns: no columns left");
    }
    return keep;
}

Eigen::MatrixXd drop_columns(const Eigen::MatrixXd& X, const std::vector<int>& drop) {
    for (int j : drop) {
        if (j < 0 || j >= X.cols()) {
            throw std::invalid_argument("drop_columns: column index out of range");
        }
    }
    const auto keep = kept_columns(X.cols(), drop);
    Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.col(static_cast<Eigen::Index>(i)) = X.col(keep[i]);
    }
    return out;
}

}  // namespace gpsim

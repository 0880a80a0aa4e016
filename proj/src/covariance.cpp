#include "fcpca/covariance.hpp"

#include <cmath>

namespace fcpca {

Centered center_series(const Series& x) {
    if (x.values.rows() == 0 || x.values.cols() == 0) {
        throw std::invalid_argument("series '" + x.id + "' is empty");
    }
    if (!x.values.allFinite()) {
        throw std::invalid_argument("series '" + x.id + "' contains non-finite values");
    }
    Centered out;
    out.mean = x.values.colwise().mean();
    out.series.id = x.id;
    out.series.values = x.values.rowwise() - out.mean.transpose();
    return out;
}

Vector scale_to_unit_variance(Series& x) {
    const Eigen::Index t = x.values.rows();
    const Eigen::Index p = x.values.cols();
    Vector scale = Vector::Ones(p);
    if (t < 2) {
        return scale;
    }
    const Vector mean = x.values.colwise().mean();
    for (Eigen::Index j = 0; j < p; ++j) {
        const double ss = (x.values.col(j).array() - mean(j)).square().sum();
        const double sd = std::sqrt(ss / static_cast<double>(t - 1));
        if (sd > 0.0) {
            scale(j) = sd;
            x.values.col(j) /= sd;
        }
    }
    return scale;
}

LagCov lagged_cross_covariance(const Series& x, int lag) {
    const Eigen::Index t = x.values.rows();
    if (lag < 0 || lag >= t) {
        throw std::invalid_argument("lag " + std::to_string(lag) +
                                    " out of range for series of length " + std::to_string(t));
    }
    const Vector mean = x.values.colwise().mean();
    const Matrix centered = x.values.rowwise() - mean.transpose();

    // sum over t = lag+1..T of x_t x_{t-lag}^T, as a single product of the
    // trailing rows against the leading rows.
    LagCov out;
    out.lag = lag;
    out.matrix = centered.bottomRows(t - lag).transpose() * centered.topRows(t - lag) /
                 static_cast<double>(t - lag);
    if (lag == 0) {
        // exact symmetry (the raw product is symmetric only up to rounding)
        out.matrix = ((out.matrix + out.matrix.transpose()) / 2.0).eval();
    }
    return out;
}

BlockCovariance block_covariance(const Series& x, int lag) {
    if (lag < 1) {
        throw std::invalid_argument("block covariance requires lag >= 1");
    }
    const Matrix g0 = lagged_cross_covariance(x, 0).matrix;
    const Matrix gl = lagged_cross_covariance(x, lag).matrix;
    const Eigen::Index p = g0.rows();

    BlockCovariance out;
    out.lag = lag;
    out.matrix.resize(2 * p, 2 * p);
    out.matrix.topLeftCorner(p, p) = g0;
    out.matrix.topRightCorner(p, p) = gl;
    out.matrix.bottomLeftCorner(p, p) = gl.transpose();
    out.matrix.bottomRightCorner(p, p) = g0;
    return out;
}

AugmentedSeries augmented_matrix(const Series& x, int lag) {
    const Eigen::Index t = x.values.rows();
    const Eigen::Index p = x.values.cols();
    if (lag < 1 || lag >= t) {
        throw std::invalid_argument("lag " + std::to_string(lag) +
                                    " out of range for series of length " + std::to_string(t));
    }
    AugmentedSeries out;
    out.lag = lag;
    out.matrix.resize(t - lag, 2 * p);
    out.matrix.leftCols(p) = x.values.topRows(t - lag);
    out.matrix.rightCols(p) = x.values.bottomRows(t - lag);
    return out;
}

}  // namespace fcpca

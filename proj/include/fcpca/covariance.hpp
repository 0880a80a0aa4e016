#pragma once

#include "fcpca/types.hpp"

namespace fcpca {

/// A series together with the column means that were removed from it.
struct Centered {
    Series series;
    Vector mean;
};

/// Mean-centers every column. Throws std::invalid_argument on empty or
/// non-finite input.
Centered center_series(const Series& x);

/// Divides each column by its sample standard deviation, in place.
/// Constant columns are left unscaled. Returns the applied divisors.
Vector scale_to_unit_variance(Series& x);

/// Sample cross-covariance at one lag, p x p.
/// Asymmetric for lag > 0; symmetric PSD at lag 0.
struct LagCov {
    int lag = 0;
    Matrix matrix;
};

/// 2p x 2p symmetric block matrix pairing lag-0 and lag-l covariances:
/// [[G(0), G(l)], [G(l)^T, G(0)]].
struct BlockCovariance {
    int lag = 0;
    Matrix matrix;
};

/// (T-l) x 2p matrix whose row j is (x_j, x_{j+l}) of the centered series.
struct AugmentedSeries {
    int lag = 0;
    Matrix matrix;
};

/// G(l) = 1/(T-l) * sum_{t=l+1..T} (x_t - mean)(x_{t-l} - mean)^T.
/// Column means are removed internally, so pre-centered input is unchanged.
LagCov lagged_cross_covariance(const Series& x, int lag);

/// Assembles the lag-l block matrix from G(0) and G(l). Requires lag >= 1.
BlockCovariance block_covariance(const Series& x, int lag);

/// Stacks rows 1..T-l beside rows 1+l..T. Requires 1 <= lag < T.
AugmentedSeries augmented_matrix(const Series& x, int lag);

}  // namespace fcpca

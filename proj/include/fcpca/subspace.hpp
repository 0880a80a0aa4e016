#pragma once

#include "fcpca/covariance.hpp"

#include <span>

namespace fcpca {

/// Full symmetric eigendecomposition, eigenvalues sorted descending and each
/// eigenvector's largest-magnitude entry made positive (reproducible signs).
struct EigenSystem {
    Vector eigenvalues;
    Matrix eigenvectors;
};

/// Orthonormal basis of a retained leading subspace plus its projector.
/// complement holds the discarded eigenvector columns; residual energies are
/// evaluated through whichever of the two is thinner.
struct ProjectionBasis {
    int lag = 0;
    int k = 0;
    Matrix basis;       // 2p x k
    Matrix complement;  // 2p x (2p - k)
    Matrix projector;   // basis * basis^T, 2p x 2p
};

/// Membership-weighted average of same-size symmetric blocks:
/// sum_i w_i^m B_i / sum_i w_i^m. Throws degenerate_cluster_error when the
/// weight mass vanishes.
Matrix weighted_common_covariance(std::span<const Matrix> blocks, const Vector& memberships,
                                  double m);

EigenSystem eigen_sym(const Matrix& matrix);

struct ComponentCount {
    int k = 1;
    bool degenerate_spectrum = false;  // all eigenvalues ~ 0
};

/// Smallest r whose leading eigenvalues reach `ratio` of the total, with
/// negative eigenvalues clamped to zero for the ratio only.
ComponentCount select_k(const Vector& eigenvalues, double ratio = 0.95);

ProjectionBasis make_basis(const EigenSystem& eigsys, int k, int lag = 0);

/// Frobenius distance between xhat and its projection onto the basis
/// (squared when requested).
double reconstruction_error(const AugmentedSeries& xhat, const ProjectionBasis& basis,
                            bool squared);

}  // namespace fcpca

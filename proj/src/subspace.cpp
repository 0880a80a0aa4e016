#include "fcpca/subspace.hpp"

#include <algorithm>
#include <cmath>

namespace fcpca {

Matrix weighted_common_covariance(std::span<const Matrix> blocks, const Vector& memberships,
                                  double m) {
    if (blocks.empty()) {
        throw std::invalid_argument("weighted_common_covariance: no blocks");
    }
    if (static_cast<Eigen::Index>(blocks.size()) != memberships.size()) {
        throw std::invalid_argument("weighted_common_covariance: weight count mismatch");
    }
    const Eigen::Index d = blocks.front().rows();
    Matrix acc = Matrix::Zero(d, d);
    double mass = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].rows() != d || blocks[i].cols() != d) {
            throw std::invalid_argument("weighted_common_covariance: block size mismatch");
        }
        const double w = std::pow(memberships(static_cast<Eigen::Index>(i)), m);
        if (w > 0.0) {
            acc.noalias() += w * blocks[i];
            mass += w;
        }
    }
    if (!(mass > 0.0)) {
        throw degenerate_cluster_error("cluster has zero membership mass");
    }
    return acc / mass;
}

EigenSystem eigen_sym(const Matrix& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("eigen_sym: matrix not square");
    }
    if (!matrix.allFinite()) {
        throw std::invalid_argument("eigen_sym: non-finite entries");
    }
    const Matrix sym = (matrix + matrix.transpose()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigen_sym: eigendecomposition failed");
    }

    const Eigen::Index d = sym.rows();
    EigenSystem out;
    out.eigenvalues.resize(d);
    out.eigenvectors.resize(d, d);
    // Eigen returns ascending order; flip to descending.
    for (Eigen::Index j = 0; j < d; ++j) {
        out.eigenvalues(j) = solver.eigenvalues()(d - 1 - j);
        out.eigenvectors.col(j) = solver.eigenvectors().col(d - 1 - j);
    }
    // Sign rule: largest-magnitude entry of each column positive, first index
    // winning ties, so repeated runs agree bit for bit.
    for (Eigen::Index j = 0; j < d; ++j) {
        Eigen::Index imax = 0;
        double best = std::abs(out.eigenvectors(0, j));
        for (Eigen::Index r = 1; r < d; ++r) {
            const double a = std::abs(out.eigenvectors(r, j));
            if (a > best) {
                best = a;
                imax = r;
            }
        }
        if (out.eigenvectors(imax, j) < 0.0) {
            out.eigenvectors.col(j) = -out.eigenvectors.col(j);
        }
    }
    return out;
}

ComponentCount select_k(const Vector& eigenvalues, double ratio) {
    const Eigen::Index d = eigenvalues.size();
    if (d == 0) {
        throw std::invalid_argument("select_k: empty spectrum");
    }
    if (!(ratio > 0.0 && ratio <= 1.0)) {
        throw std::invalid_argument("select_k: ratio must lie in (0, 1]");
    }
    const Vector clamped = eigenvalues.cwiseMax(0.0);
    const double total = clamped.sum();
    if (!(total > 0.0)) {
        return {1, true};
    }
    double cum = 0.0;
    for (Eigen::Index r = 0; r < d; ++r) {
        cum += clamped(r);
        if (cum / total >= ratio) {
            return {static_cast<int>(r + 1), false};
        }
    }
    return {static_cast<int>(d), false};
}

ProjectionBasis make_basis(const EigenSystem& eigsys, int k, int lag) {
    const Eigen::Index d = eigsys.eigenvectors.cols();
    if (k < 1 || k > d) {
        throw std::invalid_argument("make_basis: k " + std::to_string(k) +
                                    " out of range [1, " + std::to_string(d) + "]");
    }
    ProjectionBasis out;
    out.lag = lag;
    out.k = k;
    out.basis = eigsys.eigenvectors.leftCols(k);
    out.complement = eigsys.eigenvectors.rightCols(d - k);
    out.projector.noalias() = out.basis * out.basis.transpose();
    return out;
}

double reconstruction_error(const AugmentedSeries& xhat, const ProjectionBasis& basis,
                            bool squared) {
    if (xhat.matrix.cols() != basis.basis.rows()) {
        throw std::invalid_argument("reconstruction_error: dimension mismatch (" +
                                    std::to_string(xhat.matrix.cols()) + " columns vs basis in " +
                                    std::to_string(basis.basis.rows()) + " dimensions)");
    }
    const Matrix residual = xhat.matrix - (xhat.matrix * basis.basis) * basis.basis.transpose();
    const double sq = residual.squaredNorm();
    return squared ? sq : std::sqrt(sq);
}

}  // namespace fcpca

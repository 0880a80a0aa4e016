#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcpca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One multivariate time series: rows are time points, columns are variables.
struct Series {
    Matrix values;
    std::string id;

    Eigen::Index length() const { return values.rows(); }
    Eigen::Index dim() const { return values.cols(); }
};

/// Ordered collection of series sharing a common variable dimension.
/// Lengths may differ between series.
struct MtsDataset {
    std::vector<Series> series;

    std::size_t size() const { return series.size(); }
    Eigen::Index dim() const { return series.empty() ? 0 : series.front().dim(); }
};

/// Thrown when a cluster loses all membership mass during an axis update.
class degenerate_cluster_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Checks dimension agreement, finiteness, and the minimum-length guard
/// T >= max_lag + 2 for every series. Throws std::invalid_argument naming
/// the offending series.
void validate_dataset(const MtsDataset& data, int max_lag);

/// Deterministic sub-seed derivation: splitmix64 applied to base ^ golden-ratio
/// mixed stream id. Used to give each series (or run) an independent engine
/// from one user-visible seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace fcpca

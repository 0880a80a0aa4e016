#pragma once

#include "fcpca/subspace.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace fcpca {

struct FcpcaConfig {
    int clusters = 2;             // S
    std::optional<double> m;      // fixed fuzziness; unset selects from m_grid by CVI
    int lags = 2;                 // L
    double var_ratio = 0.95;
    int max_iter = 50;
    double tol = 1e-6;            // relative objective-change tolerance
    int replicates = 3;           // R; replicate r runs with seed + r
    std::uint64_t seed = 42;
    std::vector<double> m_grid = default_m_grid();
    double zero_error_eps = 1e-12;
    bool unit_variance = false;

    static std::vector<double> default_m_grid();  // 1.1, 1.2, ..., 2.2
    void validate() const;
};

/// Second-order summaries computed once per dataset and shared by every run:
/// per-lag block covariances, Gram matrices of the augmented series, and the
/// retained component counts k(l) fixed from the grand-average spectrum.
struct PreparedDataset {
    int p = 0;
    int lags = 0;
    std::vector<std::string> ids;
    std::vector<std::vector<Matrix>> blocks;  // [lag-1][series], 2p x 2p
    std::vector<std::vector<Matrix>> grams;   // [lag-1][series], Xhat^T Xhat
    std::vector<Vector> gram_traces;          // [lag-1], one value per series
    std::vector<int> k_per_lag;
    bool degenerate_spectrum = false;

    std::size_t size() const { return ids.size(); }
    int dim2p() const { return 2 * p; }
};

PreparedDataset prepare_dataset(const MtsDataset& data, const FcpcaConfig& config);

/// N x S row-stochastic matrix of membership degrees.
using MembershipMatrix = Matrix;

/// Uniform(0,1) draws, row-normalized. Entries are drawn row by row.
MembershipMatrix init_membership(Eigen::Index n, int clusters, std::mt19937_64& rng);

using ClusterBases = std::vector<std::vector<ProjectionBasis>>;  // [cluster][lag-1]

/// Axis update: per cluster and lag, eigenvectors of the membership-weighted
/// common covariance truncated at the prepared k(l).
ClusterBases update_bases(const PreparedDataset& prep, const MembershipMatrix& memberships,
                          double m);

/// e(i,s) = sum over lags of the squared residual of series i against the
/// basis of cluster s.
Matrix cluster_errors(const PreparedDataset& prep, const ClusterBases& bases);

/// Same residuals kept per lag (unsquared), for the hard baseline.
std::vector<Matrix> per_lag_errors_unsquared(const PreparedDataset& prep,
                                             const ClusterBases& bases);

/// Closed-form simplex minimizer of sum_s u_s^m e_s subject to sum u = 1.
/// Rows with an error below zero_error_eps collapse onto the lowest-index
/// minimal-error cluster.
MembershipMatrix update_membership(const Matrix& errors, double m,
                                   double zero_error_eps = 1e-12);

/// Total weighted reconstruction error sum_i sum_s u_is^m e_is.
double objective(const MembershipMatrix& memberships, const Matrix& errors, double m);

struct ClusterRun {
    MembershipMatrix memberships;
    ClusterBases bases;
    double objective = 0.0;
    std::optional<double> cvi;  // unset when clusters == 1
    int iterations = 0;
    bool converged = false;
    std::vector<int> k_per_lag;
    std::uint64_t seed_used = 0;
    double m = 0.0;
    int clusters = 0;
};

/// One alternating-optimization run from a given initial membership matrix.
/// objective_trace, when given, receives the objective of every iteration.
ClusterRun fcpca_from_init(const PreparedDataset& prep, const FcpcaConfig& config, double m,
                           MembershipMatrix memberships,
                           std::vector<double>* objective_trace = nullptr);

/// One run with random initialization. A degenerate cluster triggers a fresh
/// draw from rng, at most five times, before the error surfaces.
ClusterRun fcpca_single(const PreparedDataset& prep, const FcpcaConfig& config, double m,
                        std::mt19937_64& rng);

struct FitReport {
    struct MEntry {
        double m = 0.0;
        double objective = 0.0;
        double cvi = 0.0;
    };
    std::vector<MEntry> grid;                    // one row per m examined
    std::vector<int> iterations_per_replicate;   // replicates of the winning m
};

/// Replicated fit. Fixed m: best objective across replicates. Auto m: best
/// objective per grid value, then minimum CVI across the grid (ties keep the
/// smaller m).
ClusterRun fcpca_fit(const PreparedDataset& prep, const FcpcaConfig& config,
                     FitReport* report = nullptr);

/// Adapted Xie-Beni index: objective over N times the minimal pairwise
/// lag-summed squared projector distance. Requires at least two clusters;
/// +inf when projectors coincide.
double cvi(const ClusterRun& run);

struct HardRun {
    std::vector<int> labels;  // 1-based cluster ids
    double overall_error = 0.0;
    ClusterBases bases;
    int iterations = 0;
    bool converged = false;
    std::vector<int> k_per_lag;
};

/// Hard baseline: assignment by minimal lag-summed unsquared reconstruction
/// error, axes from plain averages over current members.
HardRun hard_cluster(const PreparedDataset& prep, const FcpcaConfig& config,
                     std::vector<double>* error_trace = nullptr);

struct CrispLabels {
    static constexpr int kMixed = 0;
    std::vector<int> labels;  // 1-based cluster id, or kMixed
    bool threshold_below_uniform = false;
};

/// Argmax label when the row maximum reaches the threshold, mixed otherwise.
CrispLabels to_crisp(const MembershipMatrix& memberships, double threshold);

struct ModelSelection {
    struct Entry {
        int clusters = 0;
        double m = 0.0;
        double objective = 0.0;
        double cvi = 0.0;
    };
    ClusterRun best;
    std::vector<Entry> table;
};

/// Grid search over cluster counts (each with the config's m policy),
/// keeping the solution with the minimum CVI.
ModelSelection select_model(const PreparedDataset& prep, const FcpcaConfig& base,
                            std::span<const int> cluster_counts);

}  // namespace fcpca

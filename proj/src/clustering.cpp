#include "fcpca/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fcpca {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The block matrices pair each row with its lagged predecessor, while the
// augmented matrices stack (earlier, later). Conjugating by the half swap
// gives the covariance of the augmented rows themselves, so the eigenbasis
// lines up with the data it projects. The spectrum is unchanged.
Matrix augmented_orientation(const Matrix& cov) {
    const Eigen::Index p = cov.rows() / 2;
    Matrix out(cov.rows(), cov.cols());
    out.topLeftCorner(p, p) = cov.bottomRightCorner(p, p);
    out.topRightCorner(p, p) = cov.bottomLeftCorner(p, p);
    out.bottomLeftCorner(p, p) = cov.topRightCorner(p, p);
    out.bottomRightCorner(p, p) = cov.topLeftCorner(p, p);
    return out;
}

// Squared residual energy of series i at lag index l against a basis,
// evaluated through the Gram matrix: tr(Q^T G Q) over the discarded columns
// when those are fewer, tr(G) - tr(C^T G C) otherwise.
double residual_sq(const PreparedDataset& prep, int lag_idx, std::size_t i,
                   const ProjectionBasis& basis) {
    const Matrix& gram = prep.grams[lag_idx][i];
    const Eigen::Index q = basis.complement.cols();
    if (q == 0) {
        return 0.0;
    }
    double value;
    if (q <= basis.k) {
        const Matrix& b = basis.complement;
        value = b.cwiseProduct(gram * b).sum();
    } else {
        const Matrix& b = basis.basis;
        value = prep.gram_traces[lag_idx](static_cast<Eigen::Index>(i)) -
                b.cwiseProduct(gram * b).sum();
    }
    return std::max(0.0, value);
}

}  // namespace

std::vector<double> FcpcaConfig::default_m_grid() {
    std::vector<double> grid;
    grid.reserve(12);
    for (int j = 11; j <= 22; ++j) {
        grid.push_back(static_cast<double>(j) / 10.0);
    }
    return grid;
}

void FcpcaConfig::validate() const {
    if (clusters < 1) throw std::invalid_argument("cluster count must be >= 1");
    if (m && !(*m > 1.0)) throw std::invalid_argument("fuzziness m must exceed 1");
    if (lags < 1) throw std::invalid_argument("lag count must be >= 1");
    if (!(var_ratio > 0.0 && var_ratio <= 1.0))
        throw std::invalid_argument("variance ratio must lie in (0, 1]");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (zero_error_eps < 0.0) throw std::invalid_argument("zero_error_eps must be >= 0");
    if (!m) {
        if (m_grid.empty())
            throw std::invalid_argument("automatic fuzziness selection needs a non-empty grid");
        for (double g : m_grid) {
            if (!(g > 1.0)) throw std::invalid_argument("every grid fuzziness must exceed 1");
        }
    }
}

PreparedDataset prepare_dataset(const MtsDataset& data, const FcpcaConfig& config) {
    config.validate();
    validate_dataset(data, config.lags);

    const std::size_t n = data.size();
    const int p = static_cast<int>(data.dim());
    const int lags = config.lags;

    PreparedDataset prep;
    prep.p = p;
    prep.lags = lags;
    prep.ids.reserve(n);
    prep.blocks.assign(lags, std::vector<Matrix>(n));
    prep.grams.assign(lags, std::vector<Matrix>(n));
    prep.gram_traces.assign(lags, Vector::Zero(static_cast<Eigen::Index>(n)));

    for (std::size_t i = 0; i < n; ++i) {
        Centered centered = center_series(data.series[i]);
        if (config.unit_variance) {
            scale_to_unit_variance(centered.series);
        }
        prep.ids.push_back(data.series[i].id);
        for (int l = 1; l <= lags; ++l) {
            prep.blocks[l - 1][i] = block_covariance(centered.series, l).matrix;
            const Matrix aug = augmented_matrix(centered.series, l).matrix;
            Matrix gram = aug.transpose() * aug;
            gram = ((gram + gram.transpose()) / 2.0).eval();
            prep.gram_traces[l - 1](static_cast<Eigen::Index>(i)) = gram.trace();
            prep.grams[l - 1][i] = std::move(gram);
        }
    }

    // k(l) is fixed once from the grand-average spectrum and reused by every
    // cluster and iteration.
    prep.k_per_lag.resize(lags);
    for (int l = 0; l < lags; ++l) {
        Matrix avg = Matrix::Zero(2 * p, 2 * p);
        for (std::size_t i = 0; i < n; ++i) {
            avg += prep.blocks[l][i];
        }
        avg /= static_cast<double>(n);
        const EigenSystem es = eigen_sym(avg);
        const ComponentCount kc = select_k(es.eigenvalues, config.var_ratio);
        prep.k_per_lag[l] = kc.k;
        prep.degenerate_spectrum = prep.degenerate_spectrum || kc.degenerate_spectrum;
    }
    return prep;
}

MembershipMatrix init_membership(Eigen::Index n, int clusters, std::mt19937_64& rng) {
    if (n < 1 || clusters < 1) {
        throw std::invalid_argument("init_membership: need n >= 1 and clusters >= 1");
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MembershipMatrix u(n, clusters);
    for (Eigen::Index i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int s = 0; s < clusters; ++s) {
            u(i, s) = unit(rng);
            sum += u(i, s);
        }
        u.row(i) /= sum;
    }
    return u;
}

ClusterBases update_bases(const PreparedDataset& prep, const MembershipMatrix& memberships,
                          double m) {
    const int clusters = static_cast<int>(memberships.cols());
    ClusterBases bases(clusters, std::vector<ProjectionBasis>(prep.lags));
    for (int s = 0; s < clusters; ++s) {
        const Vector weights = memberships.col(s);
        for (int l = 0; l < prep.lags; ++l) {
            const Matrix cov = weighted_common_covariance(
                std::span<const Matrix>(prep.blocks[l]), weights, m);
            bases[s][l] =
                make_basis(eigen_sym(augmented_orientation(cov)), prep.k_per_lag[l], l + 1);
        }
    }
    return bases;
}

Matrix cluster_errors(const PreparedDataset& prep, const ClusterBases& bases) {
    const std::size_t n = prep.size();
    const int clusters = static_cast<int>(bases.size());
    Matrix errors = Matrix::Zero(static_cast<Eigen::Index>(n), clusters);
    for (int s = 0; s < clusters; ++s) {
        for (int l = 0; l < prep.lags; ++l) {
            for (std::size_t i = 0; i < n; ++i) {
                errors(static_cast<Eigen::Index>(i), s) += residual_sq(prep, l, i, bases[s][l]);
            }
        }
    }
    return errors;
}

std::vector<Matrix> per_lag_errors_unsquared(const PreparedDataset& prep,
                                             const ClusterBases& bases) {
    const std::size_t n = prep.size();
    const int clusters = static_cast<int>(bases.size());
    std::vector<Matrix> out(prep.lags,
                            Matrix::Zero(static_cast<Eigen::Index>(n), clusters));
    for (int s = 0; s < clusters; ++s) {
        for (int l = 0; l < prep.lags; ++l) {
            for (std::size_t i = 0; i < n; ++i) {
                out[l](static_cast<Eigen::Index>(i), s) =
                    std::sqrt(residual_sq(prep, l, i, bases[s][l]));
            }
        }
    }
    return out;
}

MembershipMatrix update_membership(const Matrix& errors, double m, double zero_error_eps) {
    if (!(m > 1.0)) {
        throw std::invalid_argument("update_membership: fuzziness m must exceed 1");
    }
    if ((errors.array() < 0.0).any()) {
        throw std::invalid_argument("update_membership: negative reconstruction error");
    }
    const Eigen::Index n = errors.rows();
    const Eigen::Index clusters = errors.cols();
    const double power = 1.0 / (m - 1.0);

    MembershipMatrix u(n, clusters);
    Vector ratios(clusters);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index amin = 0;
        double emin = errors(i, 0);
        for (Eigen::Index s = 1; s < clusters; ++s) {
            if (errors(i, s) < emin) {
                emin = errors(i, s);
                amin = s;
            }
        }
        if (emin < zero_error_eps) {
            // limit of the update as the minimal error vanishes
            u.row(i).setZero();
            u(i, amin) = 1.0;
            continue;
        }
        // u_s = (emin/e_s)^power normalized; ratios stay in (0,1], so no
        // overflow regardless of the error spread
        double sum = 0.0;
        for (Eigen::Index s = 0; s < clusters; ++s) {
            ratios(s) = std::pow(emin / errors(i, s), power);
            sum += ratios(s);
        }
        u.row(i) = ratios.transpose() / sum;
    }
    return u;
}

double objective(const MembershipMatrix& memberships, const Matrix& errors, double m) {
    if (memberships.rows() != errors.rows() || memberships.cols() != errors.cols()) {
        throw std::invalid_argument("objective: shape mismatch");
    }
    return (memberships.array().pow(m) * errors.array()).sum();
}

double cvi(const ClusterRun& run) {
    if (run.clusters < 2) {
        throw std::invalid_argument("cvi: undefined for fewer than two clusters");
    }
    double min_sep = kInf;
    for (std::size_t r = 0; r + 1 < run.bases.size(); ++r) {
        for (std::size_t t = r + 1; t < run.bases.size(); ++t) {
            double sep = 0.0;
            for (std::size_t l = 0; l < run.bases[r].size(); ++l) {
                sep += (run.bases[r][l].projector - run.bases[t][l].projector).squaredNorm();
            }
            min_sep = std::min(min_sep, sep);
        }
    }
    const double denom = static_cast<double>(run.memberships.rows()) * min_sep;
    if (denom < 1e-12) {
        return kInf;
    }
    return run.objective / denom;
}

ClusterRun fcpca_from_init(const PreparedDataset& prep, const FcpcaConfig& config, double m,
                           MembershipMatrix memberships, std::vector<double>* objective_trace) {
    if (memberships.rows() != static_cast<Eigen::Index>(prep.size()) ||
        memberships.cols() != config.clusters) {
        throw std::invalid_argument("fcpca_from_init: membership shape mismatch");
    }

    ClusterRun run;
    run.m = m;
    run.clusters = config.clusters;
    run.k_per_lag = prep.k_per_lag;

    double e_prev = kInf;
    ClusterBases bases;
    Matrix errors;
    double e_now = 0.0;
    for (int iter = 1; iter <= config.max_iter; ++iter) {
        bases = update_bases(prep, memberships, m);
        errors = cluster_errors(prep, bases);
        e_now = objective(memberships, errors, m);
        run.iterations = iter;
        if (objective_trace) {
            objective_trace->push_back(e_now);
        }
        if (std::isfinite(e_prev) &&
            std::abs(e_prev - e_now) < config.tol * std::max(e_prev, 1e-30)) {
            run.converged = true;
            break;
        }
        e_prev = e_now;
        // skip the trailing update so the reported objective matches the
        // reported membership matrix when max_iter is exhausted
        if (iter < config.max_iter) {
            memberships = update_membership(errors, m, config.zero_error_eps);
        }
    }

    run.memberships = std::move(memberships);
    run.bases = std::move(bases);
    run.objective = e_now;
    if (run.clusters >= 2) {
        run.cvi = cvi(run);
    }
    return run;
}

ClusterRun fcpca_single(const PreparedDataset& prep, const FcpcaConfig& config, double m,
                        std::mt19937_64& rng) {
    const auto n = static_cast<Eigen::Index>(prep.size());
    constexpr int kMaxAttempts = 5;
    for (int attempt = 1;; ++attempt) {
        try {
            return fcpca_from_init(prep, config, m,
                                   init_membership(n, config.clusters, rng));
        } catch (const degenerate_cluster_error&) {
            if (attempt >= kMaxAttempts) {
                throw;
            }
        }
    }
}

ClusterRun fcpca_fit(const PreparedDataset& prep, const FcpcaConfig& config, FitReport* report) {
    config.validate();

    const auto run_for_m = [&](double m, std::vector<int>& iterations) -> ClusterRun {
        ClusterRun best;
        for (int r = 0; r < config.replicates; ++r) {
            const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
            std::mt19937_64 rng(seed);
            ClusterRun run = fcpca_single(prep, config, m, rng);
            run.seed_used = seed;
            iterations.push_back(run.iterations);
            if (r == 0 || run.objective < best.objective) {
                best = std::move(run);
            }
        }
        return best;
    };

    if (config.m) {
        std::vector<int> iterations;
        ClusterRun best = run_for_m(*config.m, iterations);
        if (report) {
            report->grid = {{*config.m, best.objective,
                             best.cvi.value_or(std::numeric_limits<double>::quiet_NaN())}};
            report->iterations_per_replicate = std::move(iterations);
        }
        return best;
    }

    if (config.clusters < 2) {
        throw std::invalid_argument(
            "automatic fuzziness selection needs at least two clusters (the CVI "
            "separation term is empty otherwise)");
    }

    ClusterRun winner;
    std::vector<int> winner_iterations;
    double winner_cvi = kInf;
    bool have_winner = false;
    std::vector<FitReport::MEntry> grid;
    for (double m : config.m_grid) {
        std::vector<int> iterations;
        ClusterRun run = run_for_m(m, iterations);
        const double score = run.cvi.value_or(kInf);
        grid.push_back({m, run.objective, score});
        // strict comparison keeps the smaller m on ties (grid is ascending)
        if (!have_winner || score < winner_cvi) {
            winner = std::move(run);
            winner_cvi = score;
            winner_iterations = std::move(iterations);
            have_winner = true;
        }
    }
    if (report) {
        report->grid = std::move(grid);
        report->iterations_per_replicate = std::move(winner_iterations);
    }
    return winner;
}

HardRun hard_cluster(const PreparedDataset& prep, const FcpcaConfig& config,
                     std::vector<double>* error_trace) {
    config.validate();
    const std::size_t n = prep.size();
    const int clusters = config.clusters;
    if (clusters > static_cast<int>(n)) {
        throw std::invalid_argument("hard_cluster: more clusters than series");
    }

    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<int> pick_cluster(0, clusters - 1);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = pick_cluster(rng);
    }

    std::vector<std::vector<std::size_t>> members(clusters);
    const auto group = [&] {
        for (auto& g : members) g.clear();
        for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);
    };

    // make every cluster non-empty at the start by moving random series out
    // of the largest cluster
    group();
    for (int s = 0; s < clusters; ++s) {
        if (!members[s].empty()) continue;
        auto largest = std::max_element(members.begin(), members.end(),
                                        [](const auto& a, const auto& b) { return a.size() < b.size(); });
        std::uniform_int_distribution<std::size_t> pick(0, largest->size() - 1);
        const std::size_t moved = (*largest)[pick(rng)];
        largest->erase(std::find(largest->begin(), largest->end(), moved));
        labels[moved] = s;
        members[s].push_back(moved);
    }

    HardRun run;
    run.k_per_lag = prep.k_per_lag;
    Vector current_error = Vector::Zero(static_cast<Eigen::Index>(n));
    double e_prev = kInf;
    bool have_errors = false;

    for (int iter = 1; iter <= config.max_iter; ++iter) {
        group();
        // An emptied cluster is reseeded with the worst-reconstructed series,
        // skipping series that are the sole member of their own cluster.
        for (int s = 0; s < clusters; ++s) {
            if (!members[s].empty()) continue;
            std::size_t worst = n;
            double worst_error = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (members[static_cast<std::size_t>(labels[i])].size() < 2) continue;
                const double err = have_errors ? current_error(static_cast<Eigen::Index>(i)) : 0.0;
                if (err > worst_error) {
                    worst_error = err;
                    worst = i;
                }
            }
            if (worst == n) {
                throw degenerate_cluster_error("hard_cluster: cannot reseed empty cluster");
            }
            auto& old_members = members[static_cast<std::size_t>(labels[worst])];
            old_members.erase(std::find(old_members.begin(), old_members.end(), worst));
            labels[worst] = s;
            members[s].push_back(worst);
        }

        ClusterBases bases(clusters, std::vector<ProjectionBasis>(prep.lags));
        for (int s = 0; s < clusters; ++s) {
            for (int l = 0; l < prep.lags; ++l) {
                Matrix avg = Matrix::Zero(2 * prep.p, 2 * prep.p);
                for (std::size_t i : members[s]) {
                    avg += prep.blocks[l][i];
                }
                avg /= static_cast<double>(members[s].size());
                bases[s][l] =
                    make_basis(eigen_sym(augmented_orientation(avg)), prep.k_per_lag[l], l + 1);
            }
        }

        const std::vector<Matrix> lag_errors = per_lag_errors_unsquared(prep, bases);
        bool labels_changed = false;
        double e_now = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best_s = 0;
            double best_e = kInf;
            for (int s = 0; s < clusters; ++s) {
                double e = 0.0;
                for (int l = 0; l < prep.lags; ++l) {
                    e += lag_errors[l](static_cast<Eigen::Index>(i), s);
                }
                if (e < best_e) {
                    best_e = e;
                    best_s = s;
                }
            }
            if (labels[i] != best_s) {
                labels_changed = true;
                labels[i] = best_s;
            }
            current_error(static_cast<Eigen::Index>(i)) = best_e;
            e_now += best_e;
        }
        have_errors = true;

        run.bases = std::move(bases);
        run.overall_error = e_now;
        run.iterations = iter;
        if (error_trace) {
            error_trace->push_back(e_now);
        }
        if (!labels_changed ||
            (std::isfinite(e_prev) &&
             std::abs(e_prev - e_now) < config.tol * std::max(e_prev, 1e-30))) {
            run.converged = true;
            break;
        }
        e_prev = e_now;
    }

    run.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        run.labels[i] = labels[i] + 1;
    }
    return run;
}

CrispLabels to_crisp(const MembershipMatrix& memberships, double threshold) {
    const Eigen::Index n = memberships.rows();
    const Eigen::Index clusters = memberships.cols();
    CrispLabels out;
    out.threshold_below_uniform =
        threshold <= 1.0 / static_cast<double>(clusters) || threshold > 1.0;
    out.labels.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index amax = 0;
        double best = memberships(i, 0);
        for (Eigen::Index s = 1; s < clusters; ++s) {
            if (memberships(i, s) > best) {
                best = memberships(i, s);
                amax = s;
            }
        }
        out.labels[static_cast<std::size_t>(i)] =
            best >= threshold ? static_cast<int>(amax) + 1 : CrispLabels::kMixed;
    }
    return out;
}

ModelSelection select_model(const PreparedDataset& prep, const FcpcaConfig& base,
                            std::span<const int> cluster_counts) {
    if (cluster_counts.empty()) {
        throw std::invalid_argument("select_model: no cluster counts");
    }
    ModelSelection out;
    double best_cvi = kInf;
    bool have = false;
    for (int s : cluster_counts) {
        if (s < 2) {
            throw std::invalid_argument("select_model: cluster counts must be >= 2");
        }
        FcpcaConfig cfg = base;
        cfg.clusters = s;
        FitReport report;
        ClusterRun run = fcpca_fit(prep, cfg, &report);
        for (const auto& entry : report.grid) {
            out.table.push_back({s, entry.m, entry.objective, entry.cvi});
        }
        const double score = run.cvi.value_or(kInf);
        if (!have || score < best_cvi) {
            out.best = std::move(run);
            best_cvi = score;
            have = true;
        }
    }
    return out;
}

}  // namespace fcpca

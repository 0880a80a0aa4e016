#include "fcpca/clustering.hpp"

#include "fcpca/eval.hpp"
#include "fcpca/simgen.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace fcpca;

namespace {

MtsDataset white_noise_dataset(int n, int p, int t, std::uint64_t seed) {
    MtsDataset data;
    for (int i = 0; i < n; ++i) {
        VarmaSpec spec{p, {}, {}, {}};
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        data.series.push_back(simulate_varma(spec, t, 0, rng, "wn_" + std::to_string(i)));
    }
    return data;
}

// 10 VAR(1) + 10 VMA(1) series, no mixed group.
MtsDataset two_group_dataset(int p, int t, std::uint64_t seed) {
    std::mt19937_64 rng(derive_seed(seed, 0));
    const Matrix phi = random_stable_matrix(p, 0.5, rng);
    const Matrix theta = random_stable_matrix(p, 0.5, rng);
    const VarmaSpec var_spec{p, {phi}, {}, {}};
    const VarmaSpec vma_spec{p, {}, {theta}, {}};
    MtsDataset data;
    for (int i = 0; i < 20; ++i) {
        std::mt19937_64 series_rng(derive_seed(seed, 100 + static_cast<std::uint64_t>(i)));
        data.series.push_back(simulate_varma(i < 10 ? var_spec : vma_spec, t, 200, series_rng,
                                             "s_" + std::to_string(i)));
    }
    return data;
}

}  // namespace

TEST_CASE("init_membership rows are stochastic and seed-stable") {
    std::mt19937_64 rng(7);
    const MembershipMatrix u = init_membership(6, 3, rng);
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        CHECK(u.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(u.row(i).minCoeff() >= 0.0);
    }

    std::mt19937_64 rng_a(99);
    std::mt19937_64 rng_b(99);
    const MembershipMatrix a = init_membership(5, 4, rng_a);
    const MembershipMatrix b = init_membership(5, 4, rng_b);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng_one(3);
    const MembershipMatrix single = init_membership(4, 1, rng_one);
    CHECK((single.array() == 1.0).all());
}

TEST_CASE("cluster_errors is zero under full-rank bases") {
    FcpcaConfig cfg;
    cfg.clusters = 2;
    cfg.m = 2.0;
    cfg.var_ratio = 1.0;  // keep every component
    const MtsDataset data = white_noise_dataset(4, 2, 60, 11);
    const PreparedDataset prep = prepare_dataset(data, cfg);
    REQUIRE(prep.k_per_lag[0] == 2 * prep.p);

    std::mt19937_64 rng(1);
    const MembershipMatrix u = init_membership(4, 2, rng);
    const Matrix errors = cluster_errors(prep, update_bases(prep, u, 2.0));
    CHECK(errors.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("cluster_errors matches the per-lag reconstruction route") {
    FcpcaConfig cfg;
    cfg.clusters = 1;
    cfg.m = 1.5;
    const MtsDataset data = white_noise_dataset(1, 3, 50, 13);
    const PreparedDataset prep = prepare_dataset(data, cfg);

    MembershipMatrix u = MembershipMatrix::Ones(1, 1);
    const ClusterBases bases = update_bases(prep, u, 1.5);
    const Matrix errors = cluster_errors(prep, bases);

    // independent route: residual norms on the explicit augmented matrices
    const Centered centered = center_series(data.series[0]);
    double expected = 0.0;
    for (int l = 1; l <= cfg.lags; ++l) {
        const AugmentedSeries xhat = augmented_matrix(centered.series, l);
        expected += reconstruction_error(xhat, bases[0][static_cast<std::size_t>(l - 1)], true);
    }
    CHECK(errors(0, 0) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("cluster_errors gives duplicated series identical rows") {
    FcpcaConfig cfg;
    cfg.clusters = 2;
    cfg.m = 2.0;
    MtsDataset data = white_noise_dataset(3, 2, 40, 17);
    data.series.push_back(data.series[0]);
    data.series.back().id = "copy";
    const PreparedDataset prep = prepare_dataset(data, cfg);

    std::mt19937_64 rng(5);
    const MembershipMatrix u = init_membership(4, 2, rng);
    const Matrix errors = cluster_errors(prep, update_bases(prep, u, 2.0));
    CHECK((errors.row(0) - errors.row(3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("update_membership closed forms") {
    Matrix errors(3, 2);
    errors << 1.0, 3.0,
              2.0, 2.0,
              0.0, 5.0;
    const MembershipMatrix u = update_membership(errors, 2.0);
    CHECK(u(0, 0) == doctest::Approx(0.75));
    CHECK(u(0, 1) == doctest::Approx(0.25));
    CHECK(u(1, 0) == doctest::Approx(0.5));
    CHECK(u(1, 1) == doctest::Approx(0.5));
    CHECK(u(2, 0) == 1.0);
    CHECK(u(2, 1) == 0.0);

    CHECK_THROWS_AS(update_membership(errors, 1.0), std::invalid_argument);
}

TEST_CASE("update_membership matches the simplex grid-search oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.05, 5.0);
    Matrix errors(4, 3);
    for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            errors(i, j) = unit(rng);
        }
    }
    const double m = 1.7;
    const MembershipMatrix u = update_membership(errors, m);
    for (Eigen::Index i = 0; i < 4; ++i) {
        const Vector best = oracle::simplex_grid_min(errors.row(i).transpose(), m, 0.001);
        for (Eigen::Index j = 0; j < 3; ++j) {
            CHECK(std::abs(u(i, j) - best(j)) < 0.002);
        }
        CHECK(u.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("membership of the best cluster shrinks as m grows") {
    Matrix errors(1, 3);
    errors << 0.5, 1.0, 2.0;
    double prev = 1.0;
    for (double m : {1.1, 1.3, 1.5, 1.7, 1.9, 2.1}) {
        const MembershipMatrix u = update_membership(errors, m);
        CHECK(u(0, 0) <= prev + 1e-12);
        prev = u(0, 0);
    }
}

TEST_CASE("objective is the weighted double sum") {
    Matrix zeros = Matrix::Zero(3, 2);
    CHECK(objective(update_membership(zeros + Matrix::Ones(3, 2), 2.0), zeros, 2.0) == 0.0);

    MembershipMatrix one = MembershipMatrix::Ones(1, 1);
    Matrix e(1, 1);
    e << 7.0;
    CHECK(objective(one, e, 1.3) == doctest::Approx(7.0));

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MembershipMatrix u(3, 2);
    Matrix errs(3, 2);
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) {
            u(i, j) = unit(rng);
            errs(i, j) = unit(rng);
        }
    }
    const double m = 1.9;
    double direct = 0.0;
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) {
            direct += std::pow(u(i, j), m) * errs(i, j);
        }
    }
    CHECK(objective(u, errs, m) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("identical series end up with uniform memberships") {
    MtsDataset data;
    const MtsDataset base = white_noise_dataset(1, 2, 50, 41);
    for (int i = 0; i < 5; ++i) {
        data.series.push_back(base.series[0]);
        data.series.back().id = "dup_" + std::to_string(i);
    }
    FcpcaConfig cfg;
    cfg.clusters = 3;
    cfg.m = 1.8;
    const PreparedDataset prep = prepare_dataset(data, cfg);
    std::mt19937_64 rng(8);
    const ClusterRun run = fcpca_single(prep, cfg, 1.8, rng);
    CHECK((run.memberships.array() - 1.0 / 3.0).abs().maxCoeff() < 1e-9);
}

TEST_CASE("single-cluster runs have unit memberships and total-error objective") {
    FcpcaConfig cfg;
    cfg.clusters = 1;
    cfg.m = 1.5;
    const MtsDataset data = white_noise_dataset(4, 2, 60, 43);
    const PreparedDataset prep = prepare_dataset(data, cfg);
    std::mt19937_64 rng(9);
    const ClusterRun run = fcpca_single(prep, cfg, 1.5, rng);
    CHECK((run.memberships.array() == 1.0).all());
    const Matrix errors = cluster_errors(prep, run.bases);
    CHECK(run.objective == doctest::Approx(errors.sum()).epsilon(1e-10));
    CHECK(!run.cvi.has_value());
}

TEST_CASE("objective descends across iterations") {
    const MtsDataset data = two_group_dataset(6, 120, 77);
    FcpcaConfig cfg;
    cfg.clusters = 2;
    cfg.m = 1.6;
    const PreparedDataset prep = prepare_dataset(data, cfg);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        std::mt19937_64 rng(seed);
        std::vector<double> trace;
        const ClusterRun run = fcpca_from_init(
            prep, cfg, 1.6, init_membership(static_cast<Eigen::Index>(prep.size()), 2, rng),
            &trace);
        REQUIRE(trace.size() == static_cast<std::size_t>(run.iterations));
        for (std::size_t i = 1; i < trace.size(); ++i) {
            CHECK(trace[i] <= trace[i - 1] * (1.0 + 1e-8));
        }
        CHECK(run.objective == doctest::Approx(objective(run.memberships,
                                                         cluster_errors(prep, run.bases),
                                                         run.m))
                                   .epsilon(1e-10));
    }
}

TEST_CASE("relabeling the initialization permutes the solution") {
    const MtsDataset data = two_group_dataset(4, 80, 91);
    FcpcaConfig cfg;
    cfg.clusters = 3;
    cfg.m = 1.5;
    const PreparedDataset prep = prepare_dataset(data, cfg);

    std::mt19937_64 rng(17);
    const MembershipMatrix u0 = init_membership(static_cast<Eigen::Index>(prep.size()), 3, rng);
    MembershipMatrix permuted(u0.rows(), u0.cols());
    const std::vector<int> perm = {2, 0, 1};  // new column j comes from old perm[j]
    for (int j = 0; j < 3; ++j) {
        permuted.col(j) = u0.col(perm[static_cast<std::size_t>(j)]);
    }

    const ClusterRun base = fcpca_from_init(prep, cfg, 1.5, u0);
    const ClusterRun moved = fcpca_from_init(prep, cfg, 1.5, permuted);
    for (int j = 0; j < 3; ++j) {
        CHECK((moved.memberships.col(j) - base.memberships.col(perm[static_cast<std::size_t>(j)]))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        for (int l = 0; l < cfg.lags; ++l) {
            CHECK((moved.bases[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)].projector -
                   base.bases[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]
                             [static_cast<std::size_t>(l)]
                                 .projector)
                      .cwiseAbs()
                      .maxCoeff() < 1e-10);
        }
    }
    CHECK(moved.objective == doctest::Approx(base.objective).epsilon(1e-10));
}

TEST_CASE("fcpca_fit with one replicate reproduces fcpca_single") {
    const MtsDataset data = two_group_dataset(4, 80, 55);
    FcpcaConfig cfg;
    cfg.clusters = 2;
    cfg.m = 1.4;
    cfg.replicates = 1;
    cfg.seed = 1234;
    const PreparedDataset prep = prepare_dataset(data, cfg);

    const ClusterRun fit = fcpca_fit(prep, cfg);
    std::mt19937_64 rng(1234);
    const ClusterRun single = fcpca_single(prep, cfg, 1.4, rng);
    CHECK((fit.memberships - single.memberships).cwiseAbs().maxCoeff() == 0.0);
    CHECK(fit.objective == single.objective);
}

TEST_CASE("fcpca_fit keeps the replicate with the smallest objective") {
    const MtsDataset data = two_group_dataset(4, 80, 56);
    FcpcaConfig cfg;
    cfg.clusters = 2;
    cfg.m = 1.4;
    cfg.replicates = 3;
    cfg.seed = 500;
    const PreparedDataset prep = prepare_dataset(data, cfg);

    const ClusterRun fit = fcpca_fit(prep, cfg);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < 3; ++r) {
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(r));
        best = std::min(best, fcpca_single(prep, cfg, 1.4, rng).objective);
    }
    CHECK(fit.objective == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("well-separated groups are recovered exactly at threshold 0.7") {
    const MtsDataset data = two_group_dataset(20, 200, 2025);
    FcpcaConfig cfg;
    cfg.clusters = 2;
    cfg.m = 1.4;
    cfg.seed = 7;
    const PreparedDataset prep = prepare_dataset(data, cfg);
    const ClusterRun run = fcpca_fit(prep, cfg);

    const Partition crisp = to_partition(to_crisp(run.memberships, 0.7));
    Partition truth;
    for (int i = 0; i < 20; ++i) {
        truth.labels.push_back(i < 10 ? "VAR" : "VMA");
    }
    CHECK(rand_index(crisp, truth) == doctest::Approx(1.0));
}

TEST_CASE("cvi requires two clusters and matches projector algebra") {
    ClusterRun run;
    run.clusters = 1;
    CHECK_THROWS_AS(cvi(run), std::invalid_argument);

    // two clusters with orthogonal rank-1 projectors in 2-D at each lag
    EigenSystem es;
    es.eigenvalues = Vector::Ones(2);
    es.eigenvectors = Matrix::Identity(2, 2);
    ProjectionBasis e1 = make_basis(es, 1, 1);
    EigenSystem es_flip;
    es_flip.eigenvalues = Vector::Ones(2);
    es_flip.eigenvectors = Matrix::Identity(2, 2).rowwise().reverse();
    ProjectionBasis e2 = make_basis(es_flip, 1, 1);

    run.clusters = 2;
    run.bases = {{e1, e1}, {e2, e2}};
    run.memberships = MembershipMatrix::Constant(5, 2, 0.5);
    run.objective = 3.0;
    // per-lag squared distance 2, two lags -> separation 4, denominator 5*4
    CHECK(cvi(run) == doctest::Approx(3.0 / 20.0).epsilon(1e-12));

    const double denom = 5.0 * 4.0;
    CHECK(cvi(run) * denom == doctest::Approx(run.objective).epsilon(1e-10));
}

TEST_CASE("coincident projectors push the cvi to infinity") {
    EigenSystem es;
    es.eigenvalues = Vector::Ones(2);
    es.eigenvectors = Matrix::Identity(2, 2);
    const ProjectionBasis b = make_basis(es, 1, 1);
    ClusterRun run;
    run.clusters = 2;
    run.bases = {{b, b}, {b, b}};
    run.memberships = MembershipMatrix::Constant(4, 2, 0.5);
    run.objective = 1.0;
    CHECK(std::isinf(cvi(run)));
}

TEST_CASE("degenerate spectra exhaust reinitialization attempts") {
    // univariate white noise keeps every component, so every reconstruction
    // error vanishes and all memberships collapse onto cluster one
    const MtsDataset data = white_noise_dataset(4, 1, 50, 61);
    FcpcaConfig cfg;
    cfg.clusters = 2;
    cfg.m = 1.5;
    const PreparedDataset prep = prepare_dataset(data, cfg);
    REQUIRE(prep.k_per_lag[0] == 2);
    std::mt19937_64 rng(3);
    CHECK_THROWS_AS(fcpca_single(prep, cfg, 1.5, rng), degenerate_cluster_error);
}

TEST_CASE("hard clustering with one cluster sums every reconstruction error") {
    const MtsDataset data = white_noise_dataset(4, 2, 60, 71);
    FcpcaConfig cfg;
    cfg.clusters = 1;
    cfg.m = 1.4;
    const PreparedDataset prep = prepare_dataset(data, cfg);
    const HardRun run = hard_cluster(prep, cfg);
    for (int label : run.labels) {
        CHECK(label == 1);
    }
    const std::vector<Matrix> lag_errors = per_lag_errors_unsquared(prep, run.bases);
    double expected = 0.0;
    for (const Matrix& e : lag_errors) {
        expected += e.col(0).sum();
    }
    CHECK(run.overall_error == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("hard clustering separates well-separated groups") {
    const MtsDataset data = two_group_dataset(10, 160, 83);
    FcpcaConfig cfg;
    cfg.clusters = 2;
    cfg.m = 1.4;
    cfg.seed = 11;
    const PreparedDataset prep = prepare_dataset(data, cfg);
    std::vector<double> trace;
    const HardRun run = hard_cluster(prep, cfg, &trace);

    Partition pred;
    for (int label : run.labels) {
        pred.labels.push_back(std::to_string(label));
    }
    Partition truth;
    for (int i = 0; i < 20; ++i) {
        truth.labels.push_back(i < 10 ? "A" : "B");
    }
    CHECK(rand_index(pred, truth) == doctest::Approx(1.0));
    for (std::size_t i = 1; i < trace.size(); ++i) {
        CHECK(trace[i] <= trace[i - 1] * (1.0 + 1e-8));
    }
    CHECK(run.overall_error > 0.0);
}

TEST_CASE("to_crisp applies the threshold rule") {
    MembershipMatrix u(3, 2);
    u << 0.8, 0.2,
         0.55, 0.45,
         0.65, 0.35;
    const CrispLabels at7 = to_crisp(u, 0.7);
    CHECK(at7.labels[0] == 1);
    CHECK(at7.labels[1] == CrispLabels::kMixed);
    CHECK(at7.labels[2] == CrispLabels::kMixed);
    CHECK(!at7.threshold_below_uniform);

    const CrispLabels at6 = to_crisp(u, 0.6);
    CHECK(at6.labels[2] == 1);

    MembershipMatrix tie(1, 2);
    tie << 0.5, 0.5;
    CHECK(to_crisp(tie, 0.4).labels[0] == 1);  // argmax ties go to the lowest index
    CHECK(to_crisp(tie, 0.4).threshold_below_uniform);
}

TEST_CASE("membership rows stay stochastic through full runs") {
    const MtsDataset data = two_group_dataset(5, 90, 97);
    FcpcaConfig cfg;
    cfg.clusters = 3;
    cfg.m = 1.8;
    const PreparedDataset prep = prepare_dataset(data, cfg);
    std::mt19937_64 rng(12);
    const ClusterRun run = fcpca_single(prep, cfg, 1.8, rng);
    for (Eigen::Index i = 0; i < run.memberships.rows(); ++i) {
        CHECK(run.memberships.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(run.memberships.row(i).minCoeff() >= 0.0);
        CHECK(run.memberships.row(i).maxCoeff() <= 1.0);
    }
}

// temporary diagnostic: asymmetric AR / MA radii
#include "fcpca/clustering.hpp"
#include "fcpca/eval.hpp"
#include "fcpca/simgen.hpp"
#include <cstdio>
#include <random>
using namespace fcpca;

LabeledDataset scenario(int p, double r_ar, double r_ma, int t_len, std::uint64_t seed) {
    std::mt19937_64 rng(derive_seed(seed, 0));
    Matrix phi = random_stable_matrix(p, r_ar, rng);
    Matrix theta = random_stable_matrix(p, r_ma, rng);
    const VarmaSpec var_spec{p, {phi}, {}, {}};
    const VarmaSpec vma_spec{p, {}, {theta}, {}};
    const VarmaSpec mix_spec{p, {phi}, {theta}, {}};
    LabeledDataset out;
    for (int i = 0; i < 22; ++i) {
        const VarmaSpec& spec = i < 10 ? var_spec : (i < 20 ? vma_spec : mix_spec);
        std::mt19937_64 r(derive_seed(seed, 1000 + i));
        out.dataset.series.push_back(simulate_varma(spec, t_len, 200, r, "s"));
        out.truth.labels.emplace_back(i < 10 ? "VAR" : (i < 20 ? "VMA" : "fuzzy"));
        if (i >= 20) out.truth.fuzzy_indices.push_back(i);
    }
    return out;
}

int main(int argc, char** argv) {
    const int p = std::atoi(argv[1]);
    const double r_ar = std::atof(argv[2]);
    const double r_ma = std::atof(argv[3]);
    const int unit_var = std::atoi(argv[4]);
    const std::uint64_t seed = argc > 5 ? std::strtoull(argv[5], nullptr, 10) : 4000;

    const LabeledDataset lab = scenario(p, r_ar, r_ma, 200, seed);
    FcpcaConfig cfg;
    cfg.clusters = 2;
    cfg.seed = seed;
    cfg.unit_variance = unit_var != 0;
    const PreparedDataset prep = prepare_dataset(lab.dataset, cfg);
    std::printf("p=%d r_ar=%.2f r_ma=%.2f uv=%d seed=%llu k=(%d,%d)/%d\n", p, r_ar, r_ma,
                unit_var, (unsigned long long)seed, prep.k_per_lag[0], prep.k_per_lag[1], 2 * p);
    double best_cvi = std::numeric_limits<double>::infinity();
    double best_m = 0, best_det = 0, best_ri = 0;
    for (double m : cfg.default_m_grid()) {
        FcpcaConfig one = cfg;
        one.m = m;
        const ClusterRun run = fcpca_fit(prep, one);
        const ScenarioScore sc = scenario_score(run, lab.truth, 0.7);
        const double c = run.cvi.value_or(-1.0);
        double pure_min = 1.0;
        for (int i = 0; i < 20; ++i) pure_min = std::min(pure_min, run.memberships.row(i).maxCoeff());
        std::printf("m=%.2f obj %10.1f cvi %12.4f det %d ri %.3f puremin %.3f fz (%.2f,%.2f)\n",
                    m, run.objective, c, sc.detected, sc.ri, pure_min,
                    run.memberships.row(20).maxCoeff(), run.memberships.row(21).maxCoeff());
        if (c < best_cvi) { best_cvi = c; best_m = m; best_det = sc.detected; best_ri = sc.ri; }
    }
    std::printf("selected m=%.2f -> det %.0f ri %.3f\n", best_m, best_det, best_ri);
    return 0;
}

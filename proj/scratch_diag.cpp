// temporary diagnostic: CVI landscape with unit-variance normalization
#include "fcpca/clustering.hpp"
#include "fcpca/eval.hpp"
#include "fcpca/simgen.hpp"

#include <cstdio>
#include <random>

using namespace fcpca;

LabeledDataset scenario(int p, double radius, int t_len, std::uint64_t seed) {
    std::mt19937_64 rng(derive_seed(seed, 0));
    Matrix phi = random_stable_matrix(p, radius, rng);
    Matrix theta = random_stable_matrix(p, radius, rng);
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
    const int p = argc > 1 ? std::atoi(argv[1]) : 60;
    const double radius = argc > 2 ? std::atof(argv[2]) : 0.9;
    const int unit_var = argc > 3 ? std::atoi(argv[3]) : 1;
    const std::uint64_t seed = argc > 4 ? std::strtoull(argv[4], nullptr, 10) : 4000;

    const LabeledDataset lab = scenario(p, radius, 200, seed);
    FcpcaConfig cfg;
    cfg.clusters = 2;
    cfg.seed = seed;
    cfg.unit_variance = unit_var != 0;
    const PreparedDataset prep = prepare_dataset(lab.dataset, cfg);

    std::printf("p=%d radius=%.2f unit_var=%d seed=%llu  k=(%d,%d) of %d\n", p, radius, unit_var,
                static_cast<unsigned long long>(seed), prep.k_per_lag[0], prep.k_per_lag[1],
                2 * p);
    double best_cvi = std::numeric_limits<double>::infinity();
    double best_m = 0.0;
    for (double m : cfg.default_m_grid()) {
        FcpcaConfig one = cfg;
        one.m = m;
        const ClusterRun run = fcpca_fit(prep, one);
        const ScenarioScore score = scenario_score(run, lab.truth, 0.7);
        const double c = run.cvi.value_or(-1.0);
        double pure_min = 1.0;
        for (int i = 0; i < 20; ++i)
            pure_min = std::min(pure_min, run.memberships.row(i).maxCoeff());
        std::printf("m=%.2f  obj %11.1f  cvi %14.4f  det %d  ri %.3f  puremin %.3f  fzmax (%.2f,%.2f)\n",
                    m, run.objective, c, score.detected, score.ri, pure_min,
                    run.memberships.row(20).maxCoeff(), run.memberships.row(21).maxCoeff());
        if (c < best_cvi) {
            best_cvi = c;
            best_m = m;
        }
    }
    std::printf("selected m = %.2f\n", best_m);
    return 0;
}

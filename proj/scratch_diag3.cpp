// temporary diagnostic: per-class ratios for asymmetric radii, per lag
#include "fcpca/clustering.hpp"
#include "fcpca/simgen.hpp"
#include <cstdio>
#include <random>
using namespace fcpca;

int main(int argc, char** argv) {
    const int p = std::atoi(argv[1]);
    const double r_ar = std::atof(argv[2]);
    const double r_ma = std::atof(argv[3]);
    const int uv = std::atoi(argv[4]);
    const std::uint64_t seed = 4000;

    std::mt19937_64 rng(derive_seed(seed, 0));
    Matrix phi = random_stable_matrix(p, r_ar, rng);
    Matrix theta = random_stable_matrix(p, r_ma, rng);
    const VarmaSpec var_spec{p, {phi}, {}, {}};
    const VarmaSpec vma_spec{p, {}, {theta}, {}};
    const VarmaSpec mix_spec{p, {phi}, {theta}, {}};
    MtsDataset data;
    for (int i = 0; i < 22; ++i) {
        const VarmaSpec& spec = i < 10 ? var_spec : (i < 20 ? vma_spec : mix_spec);
        std::mt19937_64 r(derive_seed(seed, 1000 + i));
        data.series.push_back(simulate_varma(spec, 200, 200, r, "s"));
    }
    FcpcaConfig cfg;
    cfg.clusters = 2;
    cfg.m = 1.2;
    cfg.unit_variance = uv != 0;
    const PreparedDataset prep = prepare_dataset(data, cfg);

    MembershipMatrix u = MembershipMatrix::Zero(22, 2);
    for (int i = 0; i < 22; ++i) {
        if (i < 10) u(i, 0) = 1.0;
        else if (i < 20) u(i, 1) = 1.0;
        else u(i, 0) = u(i, 1) = 0.5;
    }
    const ClusterBases bases = update_bases(prep, u, 2.0);
    const Matrix errors = cluster_errors(prep, bases);
    std::printf("p=%d r_ar=%.2f r_ma=%.2f uv=%d  k=(%d,%d)/%d\n", p, r_ar, r_ma, uv,
                prep.k_per_lag[0], prep.k_per_lag[1], 2 * p);
    double r_var = 0, r_vma = 0;
    for (int i = 0; i < 10; ++i) r_var += errors(i, 1) / errors(i, 0) / 10;
    for (int i = 10; i < 20; ++i) r_vma += errors(i, 0) / errors(i, 1) / 10;
    std::printf("pure ratios: VAR %.2f  VMA %.2f   fuzzy e0/e1: ", r_var, r_vma);
    for (int i = 20; i < 22; ++i) std::printf("%.2f ", errors(i, 0) / errors(i, 1));
    std::printf("\n");
    return 0;
}

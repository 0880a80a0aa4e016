#include "fcpca/simgen.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace fcpca {

namespace {

constexpr int kScenarioBurnin = 200;
constexpr int kRangeLengthLow = 200;
constexpr int kRangeLengthHigh = 600;
constexpr double kEegSampleRate = 128.0;
constexpr double kEegPoleModulus = 0.95;
constexpr double kEegNoiseSd = 0.2;

// Companion matrix of a block-coefficient polynomial: [[C1 ... Cq], [I 0]].
Matrix companion(const std::vector<Matrix>& coeffs, int p) {
    const int q = static_cast<int>(coeffs.size());
    Matrix comp = Matrix::Zero(q * p, q * p);
    for (int j = 0; j < q; ++j) {
        comp.block(0, j * p, p, p) = coeffs[static_cast<std::size_t>(j)];
    }
    if (q > 1) {
        comp.block(p, 0, (q - 1) * p, (q - 1) * p).setIdentity();
    }
    return comp;
}

// Stationary variance of a unit-innovation AR(2) process.
double ar2_stationary_variance(double phi1, double phi2) {
    const double denom = (1.0 + phi2) * ((1.0 - phi2) * (1.0 - phi2) - phi1 * phi1);
    return (1.0 - phi2) / denom;
}

Vector simulate_ar2_unit(const Ar2Band& band, int length, int burnin, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int total = length + burnin;
    Vector x = Vector::Zero(total);
    double prev1 = 0.0;
    double prev2 = 0.0;
    for (int t = 0; t < total; ++t) {
        const double value = band.phi1 * prev1 + band.phi2 * prev2 + gauss(rng);
        x(t) = value;
        prev2 = prev1;
        prev1 = value;
    }
    const double sd = std::sqrt(ar2_stationary_variance(band.phi1, band.phi2));
    return x.tail(length) / sd;
}

}  // namespace

void VarmaSpec::validate() const {
    if (p < 1) {
        throw std::invalid_argument("VarmaSpec: dimension must be >= 1");
    }
    for (const auto* part : {&ar, &ma}) {
        for (const Matrix& coeff : *part) {
            if (coeff.rows() != p || coeff.cols() != p) {
                throw std::invalid_argument("VarmaSpec: coefficient matrix is not p x p");
            }
        }
    }
    if (!ar.empty() && spectral_radius(companion(ar, p)) >= 1.0) {
        throw std::invalid_argument("VarmaSpec: AR part is not stationary");
    }
    if (!ma.empty() && spectral_radius(companion(ma, p)) >= 1.0) {
        throw std::invalid_argument("VarmaSpec: MA part is not invertible");
    }
    if (noise_cov.size() != 0 && (noise_cov.rows() != p || noise_cov.cols() != p)) {
        throw std::invalid_argument("VarmaSpec: noise covariance is not p x p");
    }
}

double spectral_radius(const Matrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix random_stable_matrix(int p, double target_radius, std::mt19937_64& rng) {
    if (p < 1) {
        throw std::invalid_argument("random_stable_matrix: dimension must be >= 1");
    }
    if (!(target_radius > 0.0 && target_radius < 1.0)) {
        throw std::invalid_argument("random_stable_matrix: target radius must lie in (0, 1)");
    }
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (;;) {
        Matrix m(p, p);
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                m(i, j) = unit(rng);
            }
        }
        const double radius = spectral_radius(m);
        if (radius > 0.0) {
            return m * (target_radius / radius);
        }
    }
}

Series simulate_varma(const VarmaSpec& spec, int length, int burnin, std::mt19937_64& rng,
                      std::string id) {
    spec.validate();
    if (length < 1 || burnin < 0) {
        throw std::invalid_argument("simulate_varma: need length >= 1 and burnin >= 0");
    }
    const int p = spec.p;
    const int a = static_cast<int>(spec.ar.size());
    const int b = static_cast<int>(spec.ma.size());
    const int total = length + burnin;

    Matrix chol;  // empty noise_cov means unit innovations
    if (spec.noise_cov.size() != 0) {
        Eigen::LLT<Matrix> llt(spec.noise_cov);
        if (llt.info() != Eigen::Success) {
            throw std::invalid_argument("simulate_varma: noise covariance is not positive definite");
        }
        chol = llt.matrixL();
    }

    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix values(total, p);
    Matrix noise(total, p);
    Vector eps(p);
    for (int t = 0; t < total; ++t) {
        for (int j = 0; j < p; ++j) {
            eps(j) = gauss(rng);
        }
        if (chol.size() != 0) {
            eps = (chol * eps).eval();
        }
        noise.row(t) = eps.transpose();
        Vector x = eps;
        for (int i = 1; i <= a; ++i) {
            if (t - i >= 0) {
                x.noalias() += spec.ar[static_cast<std::size_t>(i - 1)] *
                               values.row(t - i).transpose();
            }
        }
        for (int j = 1; j <= b; ++j) {
            if (t - j >= 0) {
                x.noalias() += spec.ma[static_cast<std::size_t>(j - 1)] *
                               noise.row(t - j).transpose();
            }
        }
        values.row(t) = x.transpose();
    }

    Series out;
    out.id = std::move(id);
    out.values = values.bottomRows(length);
    return out;
}

LabeledDataset varma_scenario(int p, std::optional<int> fixed_length, std::uint64_t seed) {
    if (p < 2) {
        throw std::invalid_argument("varma_scenario: dimension must be >= 2");
    }
    if (fixed_length && *fixed_length < 4) {
        throw std::invalid_argument("varma_scenario: length too short");
    }

    std::mt19937_64 main_rng(derive_seed(seed, 0));
    const Matrix phi = random_stable_matrix(p, 0.5, main_rng);
    const Matrix theta = random_stable_matrix(p, 0.5, main_rng);

    VarmaSpec var_spec{p, {phi}, {}, {}};
    VarmaSpec vma_spec{p, {}, {theta}, {}};
    VarmaSpec varma_spec{p, {phi}, {theta}, {}};

    constexpr int kGroupSize = 10;
    constexpr int kFuzzyCount = 2;
    const int n = 2 * kGroupSize + kFuzzyCount;

    std::vector<int> lengths(static_cast<std::size_t>(n));
    std::uniform_int_distribution<int> pick_length(kRangeLengthLow, kRangeLengthHigh);
    for (int i = 0; i < n; ++i) {
        lengths[static_cast<std::size_t>(i)] = fixed_length ? *fixed_length : pick_length(main_rng);
    }

    LabeledDataset out;
    out.dataset.series.reserve(static_cast<std::size_t>(n));
    char id[32];
    for (int i = 0; i < n; ++i) {
        const VarmaSpec* spec = nullptr;
        const char* label = nullptr;
        if (i < kGroupSize) {
            spec = &var_spec;
            label = "VAR";
            std::snprintf(id, sizeof(id), "var_%02d", i + 1);
        } else if (i < 2 * kGroupSize) {
            spec = &vma_spec;
            label = "VMA";
            std::snprintf(id, sizeof(id), "vma_%02d", i - kGroupSize + 1);
        } else {
            spec = &varma_spec;
            label = "fuzzy";
            std::snprintf(id, sizeof(id), "mix_%02d", i - 2 * kGroupSize + 1);
            out.truth.fuzzy_indices.push_back(i);
        }
        std::mt19937_64 series_rng(derive_seed(seed, 1000 + static_cast<std::uint64_t>(i)));
        out.dataset.series.push_back(simulate_varma(
            *spec, lengths[static_cast<std::size_t>(i)], kScenarioBurnin, series_rng, id));
        out.truth.labels.emplace_back(label);
    }
    return out;
}

Ar2Band ar2_band_coeffs(const std::string& name, double peak_hz, double sample_rate_hz,
                        double modulus) {
    if (!(sample_rate_hz > 0.0)) {
        throw std::invalid_argument("ar2_band_coeffs: sample rate must be positive");
    }
    if (!(peak_hz > 0.0 && peak_hz < sample_rate_hz / 2.0)) {
        throw std::invalid_argument("ar2_band_coeffs: peak must lie strictly between 0 and Nyquist");
    }
    if (!(modulus > 0.0 && modulus < 1.0)) {
        throw std::invalid_argument("ar2_band_coeffs: pole modulus must lie in (0, 1)");
    }
    Ar2Band band;
    band.name = name;
    band.peak_hz = peak_hz;
    band.modulus = modulus;
    const double angle = 2.0 * std::numbers::pi * peak_hz / sample_rate_hz;
    band.phi1 = 2.0 * modulus * std::cos(angle);
    band.phi2 = -modulus * modulus;
    return band;
}

std::vector<Ar2Band> eeg_bands() {
    return {
        ar2_band_coeffs("delta", 2.0, kEegSampleRate, kEegPoleModulus),
        ar2_band_coeffs("theta", 6.0, kEegSampleRate, kEegPoleModulus),
        ar2_band_coeffs("alpha", 10.0, kEegSampleRate, kEegPoleModulus),
        ar2_band_coeffs("beta", 20.0, kEegSampleRate, kEegPoleModulus),
        ar2_band_coeffs("gamma", 40.0, kEegSampleRate, kEegPoleModulus),
    };
}

LabeledDataset eeg_scenario(int channels, int length, std::uint64_t seed) {
    if (channels < 2) {
        throw std::invalid_argument("eeg_scenario: need at least two channels");
    }
    if (length < 64) {
        throw std::invalid_argument("eeg_scenario: need at least 64 time points");
    }

    const std::vector<Ar2Band> bands = eeg_bands();
    const int n_bands = static_cast<int>(bands.size());

    // 0.9 of the weight mass on the dominant bands, 0.1 on the rest.
    const std::vector<double> g1_base = {0.45, 0.1 / 3, 0.1 / 3, 0.1 / 3, 0.45};
    const std::vector<double> g2_base = {0.05, 0.3, 0.3, 0.3, 0.05};

    constexpr int kGroupSize = 10;
    const int n = 3 * kGroupSize;
    const int split = (channels + 1) / 2;  // fuzzy series: first half of the channels

    LabeledDataset out;
    out.dataset.series.reserve(static_cast<std::size_t>(n));
    char id[32];
    for (int i = 0; i < n; ++i) {
        const int group = i / kGroupSize;
        const char* label = group == 0 ? "group1" : (group == 1 ? "group2" : "fuzzy");
        const char* prefix = group == 0 ? "g1" : (group == 1 ? "g2" : "fz");
        std::snprintf(id, sizeof(id), "%s_%02d", prefix, i % kGroupSize + 1);
        if (group == 2) {
            out.truth.fuzzy_indices.push_back(i);
        }
        out.truth.labels.emplace_back(label);

        std::mt19937_64 rng(derive_seed(seed, 2000 + static_cast<std::uint64_t>(i)));

        Matrix latents(length, n_bands);
        for (int b = 0; b < n_bands; ++b) {
            latents.col(b) = simulate_ar2_unit(bands[static_cast<std::size_t>(b)], length,
                                               kScenarioBurnin, rng);
        }

        // per-channel loadings: the group's base profile jittered by U(0.5, 1.5)
        std::uniform_real_distribution<double> jitter(0.5, 1.5);
        Matrix loadings(n_bands, channels);
        for (int c = 0; c < channels; ++c) {
            const std::vector<double>& base =
                group == 0 ? g1_base : (group == 1 ? g2_base : (c < split ? g1_base : g2_base));
            for (int b = 0; b < n_bands; ++b) {
                loadings(b, c) = base[static_cast<std::size_t>(b)] * jitter(rng);
            }
        }

        Series series;
        series.id = id;
        series.values.noalias() = latents * loadings;
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int t = 0; t < length; ++t) {
            for (int c = 0; c < channels; ++c) {
                series.values(t, c) += kEegNoiseSd * gauss(rng);
            }
        }
        out.dataset.series.push_back(std::move(series));
    }
    return out;
}

}  // namespace fcpca

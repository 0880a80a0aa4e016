#pragma once

#include "fcpca/types.hpp"

#include <optional>
#include <random>

namespace fcpca {

/// VARMA(a, b) coefficient set. The AR part must be stationary and the MA
/// part invertible (companion spectral radius below one for both).
struct VarmaSpec {
    int p = 0;
    std::vector<Matrix> ar;
    std::vector<Matrix> ma;
    Matrix noise_cov;  // empty means identity

    void validate() const;
};

/// Ground truth attached to a generated scenario: one label per series plus
/// the indices of the series designed to straddle two regimes.
struct ScenarioTruth {
    std::vector<std::string> labels;
    std::vector<int> fuzzy_indices;
};

struct LabeledDataset {
    MtsDataset dataset;
    ScenarioTruth truth;
};

/// AR(2) coefficients placing a resonance at one EEG rhythm band.
struct Ar2Band {
    std::string name;
    double peak_hz = 0.0;
    double modulus = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
};

/// Spectral radius of a general square real matrix.
double spectral_radius(const Matrix& m);

/// Uniform(-1,1) entries rescaled so the spectral radius equals
/// target_radius.
Matrix random_stable_matrix(int p, double target_radius, std::mt19937_64& rng);

/// Simulates Eq.-style VARMA recursion from a zero initial state with
/// Gaussian innovations, discarding `burnin` leading steps.
Series simulate_varma(const VarmaSpec& spec, int length, int burnin, std::mt19937_64& rng,
                      std::string id = {});

/// 10 VAR(1) + 10 VMA(1) + 2 VARMA(1,1) series sharing one Phi and one Theta
/// (spectral radius 0.5). fixed_length selects a common length; empty draws
/// each length uniformly from [200, 600].
LabeledDataset varma_scenario(int p, std::optional<int> fixed_length, std::uint64_t seed);

/// Complex-pole AR(2) with modulus r peaking at peak_hz:
/// phi1 = 2 r cos(2 pi f / fs), phi2 = -r^2.
Ar2Band ar2_band_coeffs(const std::string& name, double peak_hz, double sample_rate_hz,
                        double modulus);

/// The five rhythm bands used by the EEG scenario (fs = 128 Hz, r = 0.95).
std::vector<Ar2Band> eeg_bands();

/// 30 series in three groups of 10: delta+gamma dominated, theta+alpha+beta
/// dominated, and a mixed group whose first half of the channels follows
/// group 1 and the rest group 2.
LabeledDataset eeg_scenario(int channels, int length, std::uint64_t seed);

}  // namespace fcpca

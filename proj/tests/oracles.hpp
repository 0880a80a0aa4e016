// Test-only reference implementations, written independently of the library
// paths they check: brute-force pair counting, dense simplex search, naive
// periodogram.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace oracle {

// Rand index by explicit enumeration of all O(N^2) pairs.
inline double rand_index_pairs(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
    const std::size_t n = a.size();
    long agreements = 0;
    long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool together_a = a[i] == a[j];
            const bool together_b = b[i] == b[j];
            if (together_a == together_b) {
                ++agreements;
            }
            ++total;
        }
    }
    return static_cast<double>(agreements) / static_cast<double>(total);
}

// Minimizer of sum_s u_s^m e_s over the probability simplex, found by dense
// grid search with the given step.
inline Eigen::VectorXd simplex_grid_min(const Eigen::VectorXd& errors, double m, double step) {
    const int s = static_cast<int>(errors.size());
    const int ticks = static_cast<int>(std::lround(1.0 / step));
    Eigen::VectorXd best = Eigen::VectorXd::Zero(s);
    double best_value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd u(s);

    // enumerate compositions of `ticks` into s parts
    std::vector<int> parts(static_cast<std::size_t>(s), 0);
    const std::function<void(int, int)> visit = [&](int idx, int remaining) {
        if (idx == s - 1) {
            parts[static_cast<std::size_t>(idx)] = remaining;
            double value = 0.0;
            for (int j = 0; j < s; ++j) {
                u(j) = parts[static_cast<std::size_t>(j)] * step;
                value += std::pow(u(j), m) * errors(j);
            }
            if (value < best_value) {
                best_value = value;
                best = u;
            }
            return;
        }
        for (int t = 0; t <= remaining; ++t) {
            parts[static_cast<std::size_t>(idx)] = t;
            visit(idx + 1, remaining - t);
        }
    };
    visit(0, ticks);
    return best;
}

// Periodogram I(f_j) = |sum_t x_t exp(-2 pi i j t / T)|^2 / T at the Fourier
// frequencies j = 0..T/2, computed by direct summation.
inline std::vector<double> periodogram(const Eigen::VectorXd& x) {
    const int t_len = static_cast<int>(x.size());
    const int half = t_len / 2;
    std::vector<double> power(static_cast<std::size_t>(half + 1), 0.0);
    for (int j = 0; j <= half; ++j) {
        double re = 0.0;
        double im = 0.0;
        const double w = 2.0 * std::numbers::pi * j / t_len;
        for (int t = 0; t < t_len; ++t) {
            re += x(t) * std::cos(w * t);
            im -= x(t) * std::sin(w * t);
        }
        power[static_cast<std::size_t>(j)] = (re * re + im * im) / t_len;
    }
    return power;
}

// Frequency (Hz) of the periodogram peak, ignoring the zero bin.
inline double peak_frequency_hz(const Eigen::VectorXd& x, double sample_rate_hz) {
    const std::vector<double> power = periodogram(x);
    std::size_t best = 1;
    for (std::size_t j = 2; j < power.size(); ++j) {
        if (power[j] > power[best]) {
            best = j;
        }
    }
    return static_cast<double>(best) * sample_rate_hz / static_cast<double>(x.size());
}

// Integrated periodogram mass over [lo_hz, hi_hz).
inline double band_mass(const std::vector<double>& power, double sample_rate_hz, int t_len,
                        double lo_hz, double hi_hz) {
    double mass = 0.0;
    for (std::size_t j = 1; j < power.size(); ++j) {
        const double f = static_cast<double>(j) * sample_rate_hz / t_len;
        if (f >= lo_hz && f < hi_hz) {
            mass += power[j];
        }
    }
    return mass;
}

}  // namespace oracle

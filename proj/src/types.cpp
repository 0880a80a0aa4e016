#include "fcpca/types.hpp"

namespace fcpca {

void validate_dataset(const MtsDataset& data, int max_lag) {
    if (data.series.empty()) {
        throw std::invalid_argument("dataset is empty");
    }
    if (max_lag < 1) {
        throw std::invalid_argument("max lag must be >= 1");
    }
    const Eigen::Index p = data.series.front().dim();
    if (p < 1) {
        throw std::invalid_argument("series dimension must be >= 1");
    }
    for (const Series& s : data.series) {
        if (s.dim() != p) {
            throw std::invalid_argument("series '" + s.id + "' has dimension " +
                                        std::to_string(s.dim()) + ", expected " +
                                        std::to_string(p));
        }
        if (s.length() < max_lag + 2) {
            throw std::invalid_argument("series '" + s.id + "' has " +
                                        std::to_string(s.length()) +
                                        " time points, need at least " +
                                        std::to_string(max_lag + 2) + " for lag " +
                                        std::to_string(max_lag));
        }
        if (!s.values.allFinite()) {
            throw std::invalid_argument("series '" + s.id + "' contains non-finite values");
        }
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream));
}

}  // namespace fcpca

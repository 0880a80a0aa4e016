#include "fcpca/eval.hpp"

#include <map>

namespace fcpca {

Partition to_partition(const CrispLabels& crisp) {
    Partition out;
    out.labels.reserve(crisp.labels.size());
    for (int label : crisp.labels) {
        out.labels.push_back(label == CrispLabels::kMixed ? "mixed" : std::to_string(label));
    }
    return out;
}

double rand_index(const Partition& a, const Partition& b) {
    const std::size_t n = a.labels.size();
    if (n != b.labels.size()) {
        throw std::invalid_argument("rand_index: partitions have different lengths");
    }
    if (n < 2) {
        throw std::invalid_argument("rand_index: need at least two items");
    }

    // contingency counts; disagreements are pairs co-clustered in exactly one
    // of the two partitions
    const auto index_of = [](const std::vector<std::string>& labels) {
        std::map<std::string, int> codes;
        std::vector<int> idx(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            idx[i] = codes.emplace(labels[i], static_cast<int>(codes.size())).first->second;
        }
        return std::pair{idx, codes.size()};
    };
    const auto [ia, ka] = index_of(a.labels);
    const auto [ib, kb] = index_of(b.labels);

    std::vector<std::int64_t> count_a(ka, 0);
    std::vector<std::int64_t> count_b(kb, 0);
    std::map<std::pair<int, int>, std::int64_t> joint;
    for (std::size_t i = 0; i < n; ++i) {
        ++count_a[static_cast<std::size_t>(ia[i])];
        ++count_b[static_cast<std::size_t>(ib[i])];
        ++joint[{ia[i], ib[i]}];
    }

    const auto pairs2 = [](std::int64_t c) { return c * (c - 1) / 2; };
    std::int64_t same_a = 0;
    std::int64_t same_b = 0;
    std::int64_t same_both = 0;
    for (std::int64_t c : count_a) same_a += pairs2(c);
    for (std::int64_t c : count_b) same_b += pairs2(c);
    for (const auto& [key, c] : joint) same_both += pairs2(c);

    const std::int64_t total = pairs2(static_cast<std::int64_t>(n));
    const std::int64_t disagreements = (same_a - same_both) + (same_b - same_both);
    return static_cast<double>(total - disagreements) / static_cast<double>(total);
}

int fuzzy_detection_count(const MembershipMatrix& memberships, double threshold,
                          const ScenarioTruth& truth) {
    const CrispLabels crisp = to_crisp(memberships, threshold);
    int detected = 0;
    for (int idx : truth.fuzzy_indices) {
        if (idx < 0 || idx >= static_cast<int>(crisp.labels.size())) {
            throw std::invalid_argument("fuzzy_detection_count: fuzzy index out of range");
        }
        if (crisp.labels[static_cast<std::size_t>(idx)] == CrispLabels::kMixed) {
            ++detected;
        }
    }
    return detected;
}

ScenarioScore scenario_score(const ClusterRun& run, const ScenarioTruth& truth,
                             double threshold) {
    if (truth.labels.size() != static_cast<std::size_t>(run.memberships.rows())) {
        throw std::invalid_argument("scenario_score: truth size mismatch");
    }
    ScenarioScore out;
    out.crisp = to_partition(to_crisp(run.memberships, threshold));
    out.ri = rand_index(out.crisp, Partition{truth.labels});
    out.detected = fuzzy_detection_count(run.memberships, threshold, truth);
    return out;
}

}  // namespace fcpca

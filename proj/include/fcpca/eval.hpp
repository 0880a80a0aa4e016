#pragma once

#include "fcpca/clustering.hpp"
#include "fcpca/simgen.hpp"

namespace fcpca {

/// Categorical labeling of a dataset; "mixed" is an ordinary label value.
struct Partition {
    std::vector<std::string> labels;
};

/// Converts crisp cluster assignments to a partition, rendering cluster ids
/// as decimal strings and the mixed state as "mixed".
Partition to_partition(const CrispLabels& crisp);

/// Proportion of series pairs on which two partitions agree (co-clustered in
/// both, or separated in both).
double rand_index(const Partition& a, const Partition& b);

/// Number of designed-fuzzy series whose memberships all fall below the
/// threshold, i.e. that the crisping rule labels mixed.
int fuzzy_detection_count(const MembershipMatrix& memberships, double threshold,
                          const ScenarioTruth& truth);

struct ScenarioScore {
    double ri = 0.0;
    int detected = 0;
    Partition crisp;
};

/// Crisps a run at the threshold and scores it against scenario truth.
ScenarioScore scenario_score(const ClusterRun& run, const ScenarioTruth& truth,
                             double threshold);

}  // namespace fcpca

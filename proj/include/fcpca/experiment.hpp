#pragma once

#include "fcpca/eval.hpp"
#include "fcpca/simgen.hpp"

#include <functional>
#include <variant>

namespace fcpca {

struct VarmaScenarioParams {
    int p = 20;
    std::optional<int> fixed_length = 200;  // empty: lengths drawn from [200, 600]
};

struct EegScenarioParams {
    int channels = 32;
    int length = 256;
};

using ScenarioParams = std::variant<VarmaScenarioParams, EegScenarioParams>;

LabeledDataset make_scenario(const ScenarioParams& params, std::uint64_t seed);

struct ReplicateParams {
    ScenarioParams scenario;
    int runs = 30;
    FcpcaConfig config;       // config.seed is the base seed; run k uses seed + k
    double threshold = 0.7;
};

struct RunRecord {
    std::uint64_t seed = 0;
    double m = 0.0;       // the fuzziness the winning run used
    double ri = 0.0;
    int detected = 0;
    double objective = 0.0;
    std::optional<double> cvi;
};

struct ReplicateAggregate {
    double mean_ri = 0.0;
    double sd_ri = 0.0;
    double mean_detected = 0.0;
    int runs = 0;
};

/// Runs `runs` independent simulate->cluster->score cycles. Cycle k draws its
/// scenario and clustering seeds from base seed + k, so results do not depend
/// on scheduling. on_row (optional) observes records in seed order as soon as
/// every earlier record is complete. Worker count comes from FCPCA_THREADS
/// (0 or unset: hardware concurrency).
std::vector<RunRecord> run_replicate(const ReplicateParams& params,
                                     const std::function<void(const RunRecord&)>& on_row = {});

ReplicateAggregate aggregate_records(const std::vector<RunRecord>& records);

/// Worker cap from FCPCA_THREADS, clamped to [1, job_count].
int worker_count(int job_count);

}  // namespace fcpca

#include "fcpca/experiment.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace fcpca {

LabeledDataset make_scenario(const ScenarioParams& params, std::uint64_t seed) {
    if (const auto* varma = std::get_if<VarmaScenarioParams>(&params)) {
        return varma_scenario(varma->p, varma->fixed_length, seed);
    }
    const auto& eeg = std::get<EegScenarioParams>(params);
    return eeg_scenario(eeg.channels, eeg.length, seed);
}

int worker_count(int job_count) {
    int cap = 0;
    if (const char* env = std::getenv("FCPCA_THREADS")) {
        cap = std::atoi(env);
    }
    if (cap <= 0) {
        cap = static_cast<int>(std::thread::hardware_concurrency());
        if (cap <= 0) {
            cap = 1;
        }
    }
    return std::max(1, std::min(cap, job_count));
}

std::vector<RunRecord> run_replicate(const ReplicateParams& params,
                                     const std::function<void(const RunRecord&)>& on_row) {
    if (params.runs < 1) {
        throw std::invalid_argument("run_replicate: need at least one run");
    }
    params.config.validate();

    const int runs = params.runs;
    std::vector<RunRecord> records(static_cast<std::size_t>(runs));
    std::vector<bool> done(static_cast<std::size_t>(runs), false);

    const auto one_cycle = [&](int k) {
        const std::uint64_t run_seed = params.config.seed + static_cast<std::uint64_t>(k);
        const LabeledDataset scenario = make_scenario(params.scenario, run_seed);
        FcpcaConfig cfg = params.config;
        cfg.seed = run_seed;
        const PreparedDataset prep = prepare_dataset(scenario.dataset, cfg);
        const ClusterRun run = fcpca_fit(prep, cfg);
        const ScenarioScore score = scenario_score(run, scenario.truth, params.threshold);

        RunRecord record;
        record.seed = run_seed;
        record.m = run.m;
        record.ri = score.ri;
        record.detected = score.detected;
        record.objective = run.objective;
        record.cvi = run.cvi;
        records[static_cast<std::size_t>(k)] = std::move(record);
    };

    const int workers = worker_count(runs);
    if (workers == 1) {
        for (int k = 0; k < runs; ++k) {
            one_cycle(k);
            if (on_row) {
                on_row(records[static_cast<std::size_t>(k)]);
            }
        }
        return records;
    }

    // rows are handed to on_row in seed order: a finished cycle is flushed
    // only once every earlier cycle has been flushed
    std::mutex mutex;
    std::atomic<int> next{0};
    int flushed = 0;
    std::exception_ptr failure;

    const auto drain = [&] {
        while (flushed < runs && done[static_cast<std::size_t>(flushed)]) {
            if (on_row) {
                on_row(records[static_cast<std::size_t>(flushed)]);
            }
            ++flushed;
        }
    };

    const auto work = [&] {
        for (;;) {
            const int k = next.fetch_add(1);
            if (k >= runs) {
                return;
            }
            try {
                one_cycle(k);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                return;
            }
            std::lock_guard lock(mutex);
            done[static_cast<std::size_t>(k)] = true;
            drain();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back(work);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return records;
}

ReplicateAggregate aggregate_records(const std::vector<RunRecord>& records) {
    ReplicateAggregate out;
    out.runs = static_cast<int>(records.size());
    if (records.empty()) {
        return out;
    }
    double sum_ri = 0.0;
    double sum_detected = 0.0;
    for (const RunRecord& r : records) {
        sum_ri += r.ri;
        sum_detected += r.detected;
    }
    out.mean_ri = sum_ri / out.runs;
    out.mean_detected = sum_detected / out.runs;
    if (records.size() > 1) {
        double ss = 0.0;
        for (const RunRecord& r : records) {
            ss += (r.ri - out.mean_ri) * (r.ri - out.mean_ri);
        }
        out.sd_ri = std::sqrt(ss / (out.runs - 1));
    }
    return out;
}

}  // namespace fcpca

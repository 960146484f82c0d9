#pragma once

#include "otfcl/classifier.hpp"
#include "otfcl/config.hpp"
#include "otfcl/metrics.hpp"
#include "otfcl/stats.hpp"
#include "otfcl/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace otfcl {

struct Sample {
    std::size_t index = 0;
    Label label = 0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// Ordered, pairwise-disjoint batches covering a training set exactly once.
/// `session_ends` holds exclusive end indices into `batches`; the last entry
/// is always `batches.size()`. Evaluation checkpoints sit on these boundaries.
struct StreamSchedule {
    std::vector<std::vector<Sample>> batches;
    std::vector<std::size_t> session_ends;
    std::size_t batch_size = 0;
    std::uint64_t seed = 0;

    std::size_t sample_count() const;

    friend bool operator==(const StreamSchedule&, const StreamSchedule&) = default;
};

/// Ascending classes grouped `step` at a time; each session shuffled and cut
/// into batches (the last one may be short).
StreamSchedule make_step_schedule(const FeatureSet& data, std::size_t step, std::size_t batch_size,
                                  std::uint64_t seed);

/// Each sample of class c is placed at N(mu_c, sigma^2), mu_c evenly spaced on
/// [0, 1] in label order; the stream is the samples sorted by position.
StreamSchedule make_gaussian_schedule(const FeatureSet& data, double sigma, std::size_t batch_size,
                                      std::uint64_t seed, std::size_t eval_every = 10);

/// Keep ceil(fraction * count) samples of every class, chosen uniformly.
FeatureSet subsample_low_data(const FeatureSet& data, double fraction, std::uint64_t seed);

StreamSchedule make_schedule(const FeatureSet& data, const RunConfig& config);

struct PassLoss {
    std::size_t session = 0;
    std::size_t epoch = 0;
    double loss = 0.0; // mean real-sample CE over the pass
};

/// The persistent engine: statistics, head and report. Nothing else survives a
/// batch; in particular no training feature is retained.
class Learner {
public:
    explicit Learner(RunConfig config);
    Learner(StatisticsStore store, LinearHead head, RunReport report);

    /// Expand, observe (if `observe`), generate pseudo-features, take one SGD
    /// step. Per-step randomness is keyed by the report's step counter.
    StepResult train_batch(const FeatureSet& data, std::span<const Sample> batch, bool observe = true);

    /// Evaluate on `test` and append a checkpoint to the report.
    double record_checkpoint(const FeatureSet& test);

    const StatisticsStore& store() const { return store_; }
    const LinearHead& head() const { return head_; }
    const RunReport& report() const { return report_; }
    const RunConfig& config() const { return report_.config; }

private:
    StatisticsStore store_;
    LinearHead head_;
    RunReport report_;
};

struct RunResult {
    LinearHead head;
    StatisticsStore store;
    RunReport report;
    std::vector<PassLoss> pass_losses;
};

/// Drive `learner` over sessions [first_session, last_session) of `schedule`.
/// Online: one pass, every sample observed once. Offline: `epochs` passes per
/// session, statistics updated on the first pass only. A checkpoint is
/// recorded at every session end.
std::vector<PassLoss> run_sessions(Learner& learner, const StreamSchedule& schedule, const FeatureSet& train,
                                   const FeatureSet& test, std::size_t first_session, std::size_t last_session);

RunResult train_online(const StreamSchedule& schedule, const FeatureSet& train, const FeatureSet& test,
                       const RunConfig& config);

RunResult train_offline(const StreamSchedule& schedule, const FeatureSet& train, const FeatureSet& test,
                        const RunConfig& config);

/// Subsample (if configured), build the schedule and train.
RunResult run_experiment(const FeatureSet& train, const FeatureSet& test, const RunConfig& config);

} // namespace otfcl

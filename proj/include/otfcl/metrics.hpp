#pragma once

#include "otfcl/classifier.hpp"
#include "otfcl/config.hpp"
#include "otfcl/stats.hpp"
#include "otfcl/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace otfcl {

struct CheckpointAccuracy {
    std::size_t checkpoint = 0;   // batches consumed when the checkpoint was taken
    std::size_t seen_classes = 0;
    double accuracy = 0.0;        // percent

    friend bool operator==(const CheckpointAccuracy&, const CheckpointAccuracy&) = default;
};

struct RunReport {
    std::vector<CheckpointAccuracy> session_accuracies;
    double last_accuracy = 0.0;
    double average_accuracy = 0.0;
    RunConfig config;
    std::uint64_t seed = 0;
    std::uint64_t steps = 0;   // SGD steps taken (also keys the per-step random streams)
    std::uint64_t samples = 0; // real samples trained on

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Percentage of test samples (restricted to the head's classes) predicted
/// correctly. With `isay_enabled`, the importance vector is computed per
/// sample from the current statistics.
double evaluate_checkpoint(const LinearHead& head, const StatisticsStore& store, const FeatureSet& test,
                           bool isay_enabled);

struct Summary {
    double last = 0.0;
    double average = 0.0;
};

Summary finalize_report(std::span<const double> accuracies);

/// Recompute last/average from `session_accuracies`.
void finalize_report(RunReport& report);

nlohmann::ordered_json to_json(const RunReport& report);
RunReport run_report_from_json(const nlohmann::json& j);

/// Summary JSON: last/average accuracy, checkpoints, config echo and seed.
std::string summary_json(const RunReport& report);

/// `checkpoint,seen_classes,accuracy` rows preceded by `#` lines carrying the
/// seed and config echo.
std::string metrics_csv(const RunReport& report);

} // namespace otfcl

#pragma once

#include "otfcl/classifier.hpp"
#include "otfcl/ican.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>

#include <json.hpp>

namespace otfcl {

enum class Mode { online, offline };
enum class ScheduleKind { step, gaussian };

std::string_view to_string(Mode mode);
std::string_view to_string(ScheduleKind kind);

struct ScheduleConfig {
    ScheduleKind kind = ScheduleKind::step;
    std::size_t step = 1;        // classes per session (step partition)
    double sigma = 0.1;          // spread of class positions (Gaussian schedule)
    std::size_t eval_every = 10; // batches between checkpoints (Gaussian schedule)

    friend bool operator==(const ScheduleConfig&, const ScheduleConfig&) = default;
};

struct RunConfig {
    Mode mode = Mode::online;
    std::size_t epochs = 1;
    std::size_t batch_size = 50;
    OptimizerConfig optimizer;
    IcanConfig ican;
    bool isay_enabled = true;
    ScheduleConfig schedule;
    double low_data_fraction = 1.0;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument on out-of-range values. Online runs always have
    /// exactly one epoch; a different value is rejected.
    void validate() const;

    /// Default offline hyperparameters: lr 1e-3, 40 epochs.
    static RunConfig offline_defaults();

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline constexpr int kConfigVersion = 1;

nlohmann::ordered_json to_json(const RunConfig& config);

/// Missing keys keep their defaults. Unknown "version" values are rejected.
RunConfig run_config_from_json(const nlohmann::json& j);

} // namespace otfcl

#pragma once

#include "otfcl/classifier.hpp"
#include "otfcl/metrics.hpp"
#include "otfcl/stats.hpp"
#include "otfcl/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

namespace otfcl {

using Bytes = std::vector<std::uint8_t>;

// Feature dump, all little-endian:
//   "I2FV" | u32 version=1 | u32 dim | u64 count | count x (u32 label, dim x f32)
inline constexpr char kDumpMagic[4] = {'I', '2', 'F', 'V'};
inline constexpr std::uint32_t kDumpVersion = 1;

/// Values are narrowed to f32. Throws NonFiniteError for NaN/Inf.
Bytes encode_dump(const FeatureSet& data);
FeatureSet decode_dump(const Bytes& bytes);

void write_dump(const std::filesystem::path& path, const FeatureSet& data);
FeatureSet read_dump(const std::filesystem::path& path);

// Checkpoint, all little-endian:
//   "I2CK" | u32 version=1 | u32 dim | u32 N
//   N x (u32 label, u64 count, dim x f64 prototype, dim x f64 sq_expectation)
//   N x u32 head label | N*dim x f64 head weights (row-major)
//   u64 report length | report JSON (UTF-8)
inline constexpr char kCheckpointMagic[4] = {'I', '2', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct EngineState {
    StatisticsStore store;
    LinearHead head;
    RunReport report;
};

Bytes encode_checkpoint(const StatisticsStore& store, const LinearHead& head, const RunReport& report);
EngineState decode_checkpoint(const Bytes& bytes);

void save_checkpoint(const std::filesystem::path& path, const StatisticsStore& store, const LinearHead& head,
                     const RunReport& report);
EngineState load_checkpoint(const std::filesystem::path& path);

/// What a checkpoint holds, counted from its bytes.
struct CheckpointAudit {
    std::size_t dim = 0;
    std::size_t classes = 0;
    std::size_t statistic_vectors = 0; // prototypes + squared expectations
    std::size_t counters = 0;
    std::size_t head_rows = 0;
    std::size_t report_bytes = 0;
    std::size_t total_bytes = 0;
    std::size_t accounted_bytes = 0; // header + sections; equals total_bytes when nothing else is stored
};

CheckpointAudit audit_checkpoint(const Bytes& bytes);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Bytes& bytes);
void write_text(const std::filesystem::path& path, const std::string& text);

enum class StdProfile {
    permuted, // one shared profile, permuted per class
    shared,   // the same profile for every class, scaled per class
};

/// Desk-scale stand-in for real feature dumps. Class c draws
///   x = common + mean_c + eps * std_c + sum_k z_k * scale_c * direction_k
/// with eps ~ N(0, I) and z ~ N(0, I_k); the directions are shared by all
/// classes and not axis-aligned.
struct SyntheticSpec {
    std::size_t class_count = 20;
    std::size_t dim = 64;
    std::size_t train_per_class = 200;
    std::size_t test_per_class = 50;
    double mean_scale = 1.0;
    // Magnitude of a nonnegative offset shared by every class, like the common
    // component of pooled backbone activations.
    double common_scale = 0.0;
    double std_min = 0.5;
    double std_max = 2.0;
    StdProfile profile = StdProfile::permuted;
    std::size_t shared_directions = 0;
    double direction_scale = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SyntheticModel {
    std::vector<std::vector<double>> means;      // per class, common offset included
    std::vector<std::vector<double>> stds;       // per class, diagonal part
    std::vector<double> class_scales;            // per class scale of the shared part
    std::vector<std::vector<double>> directions; // unit vectors
};

SyntheticModel synthetic_model(const SyntheticSpec& spec);

/// Train and test sets come from separate random streams.
std::pair<FeatureSet, FeatureSet> generate_synthetic(const SyntheticSpec& spec);

nlohmann::ordered_json to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);

} // namespace otfcl

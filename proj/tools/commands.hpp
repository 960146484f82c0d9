#pragma once

#include "otfcl/config.hpp"
#include "otfcl/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>

namespace otfcl::cli {

inline constexpr const char* kOutputDirEnv = "OTFCL_OUTPUT_DIR";

/// Overrides applied on top of a configuration file.
struct Toggles {
    std::optional<std::uint64_t> seed;
    bool no_ican = false;
    bool no_isay = false;
    std::optional<std::string> generator;
    std::optional<double> pseudo_per_real;
    std::optional<double> low_data;
};

struct ExperimentInput {
    RunConfig config;
    FeatureSet train;
    FeatureSet test;
};

/// Parse a run configuration file: the RunConfig keys plus a "data" object
/// holding either {"train": path, "test": path} (relative to the file) or
/// {"synthetic": {...}}.
ExperimentInput load_experiment(const std::filesystem::path& config_path, const Toggles& toggles);

/// --output-dir if given, else $OTFCL_OUTPUT_DIR, else ./otfcl-out.
std::filesystem::path resolve_output_dir(const std::string& flag);

struct TrainArgs {
    std::filesystem::path config;
    std::string output_dir;
    Toggles toggles;
};

struct AblateArgs {
    std::filesystem::path config;
    std::string output_dir;
    Toggles toggles;
    std::size_t runs = 5;
    bool sweep = false;
    bool generators = false;
};

struct SynthArgs {
    std::filesystem::path spec;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
};

struct EvalArgs {
    std::filesystem::path checkpoint;
    std::filesystem::path test;
    bool no_isay = false;
};

// Each returns the process exit status; failures are reported on stderr.
int run_train(const TrainArgs& args);
int run_ablate(const AblateArgs& args);
int run_synth(const SynthArgs& args);
int run_eval(const EvalArgs& args);

} // namespace otfcl::cli

#pragma once

#include "otfcl/config.hpp"
#include "otfcl/types.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace otfcl {

enum class Variant { naive, ican_only, isay_only, full };

std::string_view to_string(Variant v);

/// `base` with the two components switched on or off.
RunConfig with_variant(RunConfig base, Variant v);

struct SeedStats {
    double mean = 0.0;
    double std = 0.0; // sample standard deviation; 0 for a single run
};

SeedStats seed_stats(const std::vector<double>& values);

struct AblationCell {
    std::string group;   // "component", "quantity" or "generator"
    std::string variant;
    RunConfig config;    // seed is the first run's seed
    std::vector<double> last;
    std::vector<double> average;
};

/// Run `config` with seeds config.seed, config.seed + 1, ..., collecting
/// last/average accuracy per run.
AblationCell run_cell(const FeatureSet& train, const FeatureSet& test, const RunConfig& config, std::size_t runs,
                      std::string group, std::string variant);

struct AblationOptions {
    std::size_t runs = 5;
    bool quantity_sweep = false;   // p in {0, 0.5, 1, 2} on the full model
    bool generator_sweep = false;  // analogical vs Gaussian noise, ISAY off
};

inline constexpr double kQuantitySweep[] = {0.0, 0.5, 1.0, 2.0};

std::vector<AblationCell> run_ablation(const FeatureSet& train, const FeatureSet& test, const RunConfig& base,
                                       const AblationOptions& options);

/// One row per cell with mean and std of last/average accuracy, preceded by
/// `#` lines echoing the base config and seeds.
std::string ablation_csv(const std::vector<AblationCell>& cells, const RunConfig& base, std::size_t runs);

} // namespace otfcl

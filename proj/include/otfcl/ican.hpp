#pragma once

#include "otfcl/rng.hpp"
#include "otfcl/stats.hpp"
#include "otfcl/types.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace otfcl {

enum class GeneratorKind { analogical, gaussian_noise };

std::string_view to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(std::string_view name);

struct IcanConfig {
    bool enabled = true;
    double alpha = 1e-8;
    // Pseudo-features per real feature in a batch; round(p * batch) are drawn.
    double pseudo_per_real = 1.0;
    GeneratorKind generator = GeneratorKind::analogical;

    void validate() const;

    friend bool operator==(const IcanConfig&, const IcanConfig&) = default;
};

/// A generated feature for an old class `label`, derived from a real sample of
/// `source_label`.
struct PseudoFeature {
    std::vector<double> vector;
    Label label = 0;
    Label source_label = 0;
};

/// q = f - p.
std::vector<double> relative_distribution(std::span<const double> feature,
                                          std::span<const double> prototype);

/// Transplant the deviation of `feature` from class `y` onto class `y_bar`:
///
///   zeta = (f - p_y) * r_ybar / (r_y + alpha) + p_ybar
///
/// elementwise, with r the per-dimension standard deviations of the store.
PseudoFeature generate_analogical(const StatisticsStore& store, std::span<const double> feature,
                                  Label y, Label y_bar, double alpha);

/// Uniform draw over the seen classes other than `y`; empty if there are none.
std::optional<Label> sample_old_class(const StatisticsStore& store, Label y, Rng& rng);

/// Baseline: zeta = p_ybar + eps * r_ybar with eps ~ N(0, I).
PseudoFeature generate_gaussian_baseline(const StatisticsStore& store, Label y, Label y_bar, Rng& rng);

struct RealSample {
    std::span<const double> feature;
    Label label = 0;
};

/// Pseudo-features for one stream batch. Source features are taken in batch
/// order (wrapping around when more than one per real sample is requested) and
/// each gets an independently drawn old class. Sources whose class has no
/// other seen class are skipped.
std::vector<PseudoFeature> generate_pseudo_batch(const StatisticsStore& store,
                                                 std::span<const RealSample> batch,
                                                 const IcanConfig& config, Rng& rng);

} // namespace otfcl

#include "otfcl/ican.hpp"

#include "otfcl/errors.hpp"

#include <cmath>
#include <string>

namespace otfcl {

std::string_view to_string(GeneratorKind kind) {
    switch (kind) {
    case GeneratorKind::analogical: return "analogical";
    case GeneratorKind::gaussian_noise: return "gaussian";
    }
    return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view name) {
    if (name == "analogical") return GeneratorKind::analogical;
    if (name == "gaussian" || name == "gaussian_noise") return GeneratorKind::gaussian_noise;
    throw InvalidArgument("unknown generator '" + std::string(name) + "' (expected analogical or gaussian)");
}

void IcanConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InvalidArgument("ican.alpha must be a positive finite number");
    }
    if (!(pseudo_per_real >= 0.0) || !std::isfinite(pseudo_per_real)) {
        throw InvalidArgument("ican.pseudo_per_real must be nonnegative");
    }
}

std::vector<double> relative_distribution(std::span<const double> feature, std::span<const double> prototype) {
    if (feature.size() != prototype.size()) {
        throw DimensionError("feature and prototype lengths differ");
    }
    std::vector<double> q(feature.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = feature[i] - prototype[i];
    }
    return q;
}

PseudoFeature generate_analogical(const StatisticsStore& store, std::span<const double> feature, Label y,
                                  Label y_bar, double alpha) {
    if (y == y_bar) {
        throw InvalidArgument("pseudo-feature target class equals the source class");
    }
    if (!(alpha > 0.0)) {
        throw InvalidArgument("alpha must be positive");
    }
    const ClassStatistics& source = store.at(y);
    const ClassStatistics& target = store.at(y_bar);
    const std::vector<double> r_src = store.std_of(y);
    const std::vector<double> r_dst = store.std_of(y_bar);
    std::vector<double> q = relative_distribution(feature, source.prototype);

    PseudoFeature out;
    out.label = y_bar;
    out.source_label = y;
    out.vector.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        out.vector[i] = q[i] * (r_dst[i] / (r_src[i] + alpha)) + target.prototype[i];
    }
    return out;
}

std::optional<Label> sample_old_class(const StatisticsStore& store, Label y, Rng& rng) {
    std::vector<Label> candidates;
    candidates.reserve(store.class_count());
    for (const auto& [label, _] : store.classes()) {
        if (label != y) {
            candidates.push_back(label);
        }
    }
    if (candidates.empty()) {
        return std::nullopt;
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return candidates[pick(rng)];
}

PseudoFeature generate_gaussian_baseline(const StatisticsStore& store, Label y, Label y_bar, Rng& rng) {
    const ClassStatistics& target = store.at(y_bar);
    const std::vector<double> r = store.std_of(y_bar);
    std::normal_distribution<double> noise(0.0, 1.0);

    PseudoFeature out;
    out.label = y_bar;
    out.source_label = y;
    out.vector.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        out.vector[i] = target.prototype[i] + noise(rng) * r[i];
    }
    return out;
}

std::vector<PseudoFeature> generate_pseudo_batch(const StatisticsStore& store, std::span<const RealSample> batch,
                                                 const IcanConfig& config, Rng& rng) {
    std::vector<PseudoFeature> out;
    if (!config.enabled || batch.empty()) {
        return out;
    }
    const auto wanted =
        static_cast<std::size_t>(std::llround(config.pseudo_per_real * static_cast<double>(batch.size())));
    out.reserve(wanted);
    for (std::size_t j = 0; j < wanted; ++j) {
        const RealSample& src = batch[j % batch.size()];
        const std::optional<Label> y_bar = sample_old_class(store, src.label, rng);
        if (!y_bar) {
            continue;
        }
        if (config.generator == GeneratorKind::analogical) {
            out.push_back(generate_analogical(store, src.feature, src.label, *y_bar, config.alpha));
        } else {
            out.push_back(generate_gaussian_baseline(store, src.label, *y_bar, rng));
        }
    }
    return out;
}

} // namespace otfcl

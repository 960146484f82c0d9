#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace otfcl {

using Label = std::uint32_t;

/// A labelled set of D-dimensional feature vectors, stored row-major.
struct FeatureSet {
    std::size_t dim = 0;
    std::vector<Label> labels;
    std::vector<double> values;

    FeatureSet() = default;
    explicit FeatureSet(std::size_t d) : dim(d) {}

    std::size_t size() const { return labels.size(); }
    bool empty() const { return labels.empty(); }

    std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }

    void push_back(Label label, std::span<const double> feature);

    /// Distinct labels in ascending order.
    std::vector<Label> classes() const;

    /// Rows whose label is in `keep` (ascending), in original order.
    FeatureSet restrict_to(std::span<const Label> keep) const;
};

bool operator==(const FeatureSet& a, const FeatureSet& b);

} // namespace otfcl

#include "otfcl/types.hpp"

#include "otfcl/errors.hpp"

#include <algorithm>
#include <string>

namespace otfcl {

void FeatureSet::push_back(Label label, std::span<const double> feature) {
    if (feature.size() != dim) {
        throw DimensionError("feature has " + std::to_string(feature.size()) + " components, expected " +
                             std::to_string(dim));
    }
    labels.push_back(label);
    values.insert(values.end(), feature.begin(), feature.end());
}

std::vector<Label> FeatureSet::classes() const {
    std::vector<Label> out(labels);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FeatureSet FeatureSet::restrict_to(std::span<const Label> keep) const {
    FeatureSet out(dim);
    for (std::size_t i = 0; i < size(); ++i) {
        if (std::binary_search(keep.begin(), keep.end(), labels[i])) {
            out.push_back(labels[i], row(i));
        }
    }
    return out;
}

bool operator==(const FeatureSet& a, const FeatureSet& b) {
    return a.dim == b.dim && a.labels == b.labels && a.values == b.values;
}

} // namespace otfcl

#include "otfcl/stats.hpp"

#include "otfcl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace otfcl {

namespace {

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw InvalidArgument(std::string(what) + " has a non-finite component");
        }
    }
}

} // namespace

void StatisticsStore::observe(Label class_id, std::span<const double> feature) {
    if (feature.empty()) {
        throw DimensionError("empty feature vector");
    }
    if (dim_ != 0 && feature.size() != dim_) {
        throw DimensionError("feature has " + std::to_string(feature.size()) + " components, store has " +
                             std::to_string(dim_));
    }
    require_finite(feature, "feature");
    if (dim_ == 0) {
        dim_ = feature.size();
    }

    auto [it, inserted] = classes_.try_emplace(class_id);
    ClassStatistics& s = it->second;
    if (inserted) {
        s.class_id = class_id;
        s.prototype.assign(feature.begin(), feature.end());
        s.sq_expectation.resize(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            s.sq_expectation[i] = feature[i] * feature[i];
        }
        s.count = 1;
        return;
    }

    const double n = static_cast<double>(s.count);
    for (std::size_t i = 0; i < dim_; ++i) {
        const double f = feature[i];
        s.prototype[i] = (s.prototype[i] * n + f) / (n + 1.0);
        s.sq_expectation[i] = (s.sq_expectation[i] * n + f * f) / (n + 1.0);
    }
    ++s.count;
}

std::vector<double> StatisticsStore::std_of(Label class_id) const {
    const ClassStatistics& s = at(class_id);
    std::vector<double> r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        const double var = s.sq_expectation[i] - s.prototype[i] * s.prototype[i];
        r[i] = std::sqrt(std::max(0.0, var));
    }
    return r;
}

std::vector<Label> StatisticsStore::seen_classes() const {
    std::vector<Label> out;
    out.reserve(classes_.size());
    for (const auto& [label, _] : classes_) {
        out.push_back(label);
    }
    return out;
}

const ClassStatistics& StatisticsStore::at(Label class_id) const {
    auto it = classes_.find(class_id);
    if (it == classes_.end()) {
        throw NotFoundError("class " + std::to_string(class_id) + " has not been observed");
    }
    return it->second;
}

void StatisticsStore::restore(ClassStatistics stats) {
    if (stats.count == 0) {
        throw InvalidArgument("restored class has zero count");
    }
    if (stats.prototype.empty() || stats.prototype.size() != stats.sq_expectation.size()) {
        throw DimensionError("restored class moments have inconsistent lengths");
    }
    if (dim_ != 0 && stats.prototype.size() != dim_) {
        throw DimensionError("restored class does not match store dimension");
    }
    require_finite(stats.prototype, "prototype");
    require_finite(stats.sq_expectation, "squared expectation");
    if (classes_.count(stats.class_id) != 0) {
        throw InvalidArgument("class " + std::to_string(stats.class_id) + " restored twice");
    }
    dim_ = stats.prototype.size();
    const Label id = stats.class_id;
    classes_.emplace(id, std::move(stats));
}

} // namespace otfcl

#pragma once

#include "otfcl/types.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace otfcl {

/// First and second moments of one class, maintained by simple moving average.
struct ClassStatistics {
    Label class_id = 0;
    std::vector<double> prototype;      // running mean of features
    std::vector<double> sq_expectation; // running mean of elementwise squares
    std::uint64_t count = 0;

    friend bool operator==(const ClassStatistics&, const ClassStatistics&) = default;
};

/// Per-class streaming statistics. Holds two D-vectors and one counter per
/// seen class and nothing else, so its size never depends on stream length.
///
/// Single writer: `observe` must not race with anything. Const members may be
/// called concurrently with each other.
class StatisticsStore {
public:
    StatisticsStore() = default;

    /// Fold one sample into its class. The first sample fixes the dimension
    /// for the whole store; the first sample of a class initializes both
    /// moments directly.
    void observe(Label class_id, std::span<const double> feature);

    /// Per-dimension standard deviation sqrt(max(0, E[f^2] - E[f]^2)).
    std::vector<double> std_of(Label class_id) const;

    /// Ascending label order. Every per-class matrix in the engine uses it.
    std::vector<Label> seen_classes() const;

    const ClassStatistics& at(Label class_id) const;
    bool contains(Label class_id) const { return classes_.count(class_id) != 0; }

    std::size_t dim() const { return dim_; }
    std::size_t class_count() const { return classes_.size(); }
    bool empty() const { return classes_.empty(); }

    const std::map<Label, ClassStatistics>& classes() const { return classes_; }

    /// Reinstate a class from a checkpoint. Validates shapes and finiteness.
    void restore(ClassStatistics stats);

    friend bool operator==(const StatisticsStore&, const StatisticsStore&) = default;

private:
    std::size_t dim_ = 0;
    std::map<Label, ClassStatistics> classes_;
};

} // namespace otfcl

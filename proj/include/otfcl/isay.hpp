#pragma once

#include "otfcl/stats.hpp"
#include "otfcl/types.hpp"

#include <span>
#include <vector>

namespace otfcl {

/// Row y is softmax(max_i r_y[i] - r_y): dimensions where the class is tight
/// get the most weight. Rows follow `labels` (ascending).
struct SignificanceMatrix {
    std::vector<Label> labels;
    std::size_t dim = 0;
    std::vector<double> rows;

    std::size_t class_count() const { return labels.size(); }
    std::span<const double> row(std::size_t i) const { return {rows.data() + i * dim, dim}; }
};

SignificanceMatrix significance_matrix(const StatisticsStore& store);

/// gamma_y = sum_i u_y[i] * (f[i] - p_y[i])^2, one entry per row of `u`.
std::vector<double> weighted_distances(std::span<const double> feature, const StatisticsStore& store,
                                       const SignificanceMatrix& u);

/// Bias correction added to the softmax scores: tau_y = ||gamma||_1 / gamma_y.
struct ImportanceVector {
    std::vector<double> values;
};

inline constexpr double kZeroDistanceGuard = 1e-12;

ImportanceVector importance_vector(std::span<const double> gamma);

/// Prototypes and significance rows packed contiguously for the hot loops.
/// Built once per evaluation checkpoint from a statistics snapshot.
class IsayModel {
public:
    explicit IsayModel(const StatisticsStore& store);

    std::span<const Label> labels() const { return significance_.labels; }
    std::size_t dim() const { return significance_.dim; }
    const SignificanceMatrix& significance() const { return significance_; }

    void distances(std::span<const double> feature, std::span<double> gamma) const;
    /// Writes tau into `tau` (length = class count).
    void importance(std::span<const double> feature, std::span<double> tau) const;

private:
    SignificanceMatrix significance_;
    std::vector<double> prototypes_;
};

} // namespace otfcl

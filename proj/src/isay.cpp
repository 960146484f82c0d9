#include "otfcl/isay.hpp"

#include "otfcl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace otfcl {

namespace {

void significance_row(std::span<const double> r, std::span<double> u) {
    const double r_max = *std::max_element(r.begin(), r.end());
    // softmax(r_max - r); the largest exponent belongs to the smallest r.
    const double r_min = *std::min_element(r.begin(), r.end());
    const double shift = r_max - r_min;
    double total = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        u[i] = std::exp((r_max - r[i]) - shift);
        total += u[i];
    }
    for (double& x : u) {
        x /= total;
    }
}

double weighted_sq_distance(std::span<const double> f, const double* proto, const double* u, std::size_t dim) {
    double g = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double d = f[i] - proto[i];
        g += u[i] * d * d;
    }
    return g;
}

} // namespace

SignificanceMatrix significance_matrix(const StatisticsStore& store) {
    if (store.empty()) {
        throw InvalidState("significance matrix needs at least one seen class");
    }
    SignificanceMatrix u;
    u.dim = store.dim();
    u.labels = store.seen_classes();
    u.rows.resize(u.labels.size() * u.dim);
    for (std::size_t c = 0; c < u.labels.size(); ++c) {
        const std::vector<double> r = store.std_of(u.labels[c]);
        significance_row(r, {u.rows.data() + c * u.dim, u.dim});
    }
    return u;
}

std::vector<double> weighted_distances(std::span<const double> feature, const StatisticsStore& store,
                                       const SignificanceMatrix& u) {
    if (feature.size() != store.dim() || u.dim != store.dim()) {
        throw DimensionError("feature, statistics and significance matrix dimensions differ");
    }
    std::vector<double> gamma(u.class_count());
    for (std::size_t c = 0; c < u.class_count(); ++c) {
        const ClassStatistics& s = store.at(u.labels[c]);
        gamma[c] = weighted_sq_distance(feature, s.prototype.data(), u.row(c).data(), u.dim);
    }
    return gamma;
}

ImportanceVector importance_vector(std::span<const double> gamma) {
    if (gamma.empty()) {
        throw InvalidArgument("importance vector of an empty distance vector");
    }
    const double total = std::accumulate(gamma.begin(), gamma.end(), 0.0);
    ImportanceVector tau;
    tau.values.resize(gamma.size());
    if (total == 0.0) {
        // Every prototype hit exactly: no class is preferred.
        std::fill(tau.values.begin(), tau.values.end(), 1.0);
        return tau;
    }
    for (std::size_t c = 0; c < gamma.size(); ++c) {
        tau.values[c] = total / std::max(gamma[c], kZeroDistanceGuard);
    }
    return tau;
}

IsayModel::IsayModel(const StatisticsStore& store) : significance_(significance_matrix(store)) {
    prototypes_.reserve(significance_.rows.size());
    for (Label label : significance_.labels) {
        const auto& p = store.at(label).prototype;
        prototypes_.insert(prototypes_.end(), p.begin(), p.end());
    }
}

void IsayModel::distances(std::span<const double> feature, std::span<double> gamma) const {
    const std::size_t d = dim();
    if (feature.size() != d) {
        throw DimensionError("feature dimension does not match statistics");
    }
    for (std::size_t c = 0; c < gamma.size(); ++c) {
        gamma[c] = weighted_sq_distance(feature, prototypes_.data() + c * d, significance_.rows.data() + c * d, d);
    }
}

void IsayModel::importance(std::span<const double> feature, std::span<double> tau) const {
    distances(feature, tau);
    const double total = std::accumulate(tau.begin(), tau.end(), 0.0);
    if (total == 0.0) {
        std::fill(tau.begin(), tau.end(), 1.0);
        return;
    }
    for (double& g : tau) {
        g = total / std::max(g, kZeroDistanceGuard);
    }
}

} // namespace otfcl

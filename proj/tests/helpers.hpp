#pragma once

// Test-only generators and oracles. Nothing here calls into the code under
// test except to build inputs.

#include "otfcl/stats.hpp"
#include "otfcl/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testing {

inline bool close_rel(double a, double b, double tol) {
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) <= tol * scale;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

/// Store whose class `label` has exactly mean `mean` and population std `std`
/// (two samples at mean -/+ std).
inline void observe_pair(otfcl::StatisticsStore& store, otfcl::Label label, const std::vector<double>& mean,
                         const std::vector<double>& std) {
    std::vector<double> lo(mean.size()), hi(mean.size());
    for (std::size_t i = 0; i < mean.size(); ++i) {
        lo[i] = mean[i] - std[i];
        hi[i] = mean[i] + std[i];
    }
    store.observe(label, lo);
    store.observe(label, hi);
}

/// Welford's recursion, one instance per dimension.
struct WelfordOracle {
    std::size_t n = 0;
    std::vector<double> mean;
    std::vector<double> m2;

    void add(const std::vector<double>& x) {
        if (mean.empty()) {
            mean.assign(x.size(), 0.0);
            m2.assign(x.size(), 0.0);
        }
        ++n;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double delta = x[i] - mean[i];
            mean[i] += delta / static_cast<double>(n);
            m2[i] += delta * (x[i] - mean[i]);
        }
    }

    double population_std(std::size_t i) const { return std::sqrt(m2[i] / static_cast<double>(n)); }
};

/// Straight two-pass mean of the retained samples.
inline std::vector<double> brute_mean(const std::vector<std::vector<double>>& xs, bool squared = false) {
    std::vector<double> m(xs.front().size(), 0.0);
    for (const auto& x : xs) {
        for (std::size_t i = 0; i < x.size(); ++i) m[i] += squared ? x[i] * x[i] : x[i];
    }
    for (double& v : m) v /= static_cast<double>(xs.size());
    return m;
}

inline otfcl::FeatureSet make_blobs(std::size_t classes, std::size_t per_class, std::size_t dim, std::uint64_t seed,
                                    double separation = 3.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    otfcl::FeatureSet data(dim);
    std::vector<std::vector<double>> centers(classes, std::vector<double>(dim));
    for (auto& c : centers)
        for (double& v : c) v = separation * normal(rng);
    std::vector<double> x(dim);
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t n = 0; n < per_class; ++n) {
            for (std::size_t i = 0; i < dim; ++i) x[i] = centers[c][i] + normal(rng);
            data.push_back(static_cast<otfcl::Label>(c), x);
        }
    }
    return data;
}

} // namespace testing

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "otfcl/classifier.hpp"
#include "otfcl/errors.hpp"
#include "otfcl/isay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace otfcl;
using testing::observe_pair;

TEST_CASE("significance_matrix") {
    SUBCASE("uniform std gives uniform weights") {
        for (double c : {0.0, 0.5, 3.0}) {
            StatisticsStore s;
            observe_pair(s, 0, {1.0, 1.0, 1.0}, {c, c, c});
            const auto u = significance_matrix(s);
            for (double v : u.row(0)) CHECK(v == 1.0 / 3.0);
        }
    }
    SUBCASE("two dimensions, closed form") {
        StatisticsStore s;
        observe_pair(s, 0, {0.0, 0.0}, {0.0, 1.0});
        const auto u = significance_matrix(s);
        const double e = std::exp(1.0);
        CHECK(u.row(0)[0] == doctest::Approx(e / (e + 1)).epsilon(1e-12));
        CHECK(u.row(0)[1] == doctest::Approx(1 / (e + 1)).epsilon(1e-12));
        CHECK(u.row(0)[0] == doctest::Approx(0.73106).epsilon(1e-5));
    }
    SUBCASE("increasing std gives decreasing weights") {
        StatisticsStore s;
        observe_pair(s, 4, {0, 0, 0, 0}, {0.1, 0.4, 0.9, 2.0});
        const auto u = significance_matrix(s);
        const auto row = u.row(0);
        for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i] < row[i - 1]);
    }
    SUBCASE("empty store") {
        CHECK_THROWS_AS(significance_matrix(StatisticsStore{}), InvalidState);
    }
}

TEST_CASE("weighted_distances") {
    SUBCASE("prototype hit") {
        StatisticsStore s;
        observe_pair(s, 0, {1.0, 2.0}, {0.5, 1.0});
        observe_pair(s, 1, {-1.0, 0.0}, {0.5, 1.0});
        const auto u = significance_matrix(s);
        const auto g = weighted_distances(s.at(1).prototype, s, u);
        CHECK(g[1] == 0.0);
        CHECK(g[0] > 0.0);
    }
    SUBCASE("uniform weights, deviation (3, 4)") {
        StatisticsStore s;
        observe_pair(s, 0, {0.0, 0.0}, {1.0, 1.0});
        const auto u = significance_matrix(s);
        CHECK(u.row(0)[0] == 0.5);
        const auto g = weighted_distances(std::vector<double>{3.0, 4.0}, s, u);
        CHECK(g[0] == doctest::Approx(12.5).epsilon(1e-12));
    }
    SUBCASE("more weight on the largest deviation increases gamma") {
        StatisticsStore s;
        observe_pair(s, 0, {0.0, 0.0}, {1.0, 1.0});
        auto u = significance_matrix(s);
        const std::vector<double> f{1.0, 5.0};
        const double before = weighted_distances(f, s, u)[0];
        u.rows[1] *= 2.0;
        CHECK(weighted_distances(f, s, u)[0] > before);
    }
    SUBCASE("dimension mismatch") {
        StatisticsStore s;
        observe_pair(s, 0, {0.0, 0.0}, {1.0, 1.0});
        const auto u = significance_matrix(s);
        CHECK_THROWS_AS(weighted_distances(std::vector<double>{1.0}, s, u), DimensionError);
    }
}

TEST_CASE("importance_vector") {
    CHECK(importance_vector(std::vector<double>{1, 1}).values == std::vector<double>{2, 2});
    const auto t = importance_vector(std::vector<double>{1, 3}).values;
    CHECK(t[0] == 4.0);
    CHECK(t[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    const auto hit = importance_vector(std::vector<double>{0, 2}).values;
    CHECK(hit[0] == 2.0 / kZeroDistanceGuard);
    CHECK(std::isfinite(hit[0]));
    CHECK(argmax_first(hit) == 0);

    CHECK(importance_vector(std::vector<double>{0, 0}).values == std::vector<double>{1, 1});
    CHECK_THROWS_AS(importance_vector(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("property: significance rows sum to one and reverse the std order") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = 2 + rng() % 30;
        StatisticsStore s;
        const auto r = testing::random_vector(rng, dim, 0.0, 4.0);
        observe_pair(s, 0, testing::random_vector(rng, dim, -2, 2), r);
        const auto u = significance_matrix(s);
        const auto row = u.row(0);
        CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-9);
        const auto r_eff = s.std_of(0);
        for (std::size_t i = 0; i < dim; ++i) {
            CHECK(row[i] > 0.0);
            for (std::size_t j = 0; j < dim; ++j) {
                if (r_eff[i] < r_eff[j]) CHECK(row[i] > row[j]);
            }
        }
    }
}

TEST_CASE("property: adding a constant to every std leaves the row unchanged") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 2 + rng() % 10;
        auto r = testing::random_vector(rng, dim, 0.1, 2.0);
        const std::vector<double> mean(dim, 0.0);
        StatisticsStore a, b;
        observe_pair(a, 0, mean, r);
        for (double& x : r) x += 1.75;
        observe_pair(b, 0, mean, r);
        const auto ua = significance_matrix(a);
        const auto ub = significance_matrix(b);
        for (std::size_t i = 0; i < dim; ++i) CHECK(ua.rows[i] == doctest::Approx(ub.rows[i]).epsilon(1e-9));
    }
}

TEST_CASE("property: tau reverses the gamma ranking") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng() % 20;
        const auto gamma = testing::random_vector(rng, n, 0.01, 50.0);
        const auto tau = importance_vector(gamma).values;
        const auto argmin_gamma = static_cast<std::size_t>(std::min_element(gamma.begin(), gamma.end()) - gamma.begin());
        CHECK(argmax_first(tau) == argmin_gamma);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(tau[i] >= 1.0);
            for (std::size_t j = 0; j < n; ++j) {
                if (gamma[i] < gamma[j]) CHECK(tau[i] > tau[j]);
            }
        }
    }
}

TEST_CASE("property: relabelling classes permutes U, gamma and tau together") {
    std::mt19937_64 rng(5);
    const std::size_t n = 5, dim = 6;
    std::vector<std::vector<double>> means, stds;
    for (std::size_t c = 0; c < n; ++c) {
        means.push_back(testing::random_vector(rng, dim, -3, 3));
        stds.push_back(testing::random_vector(rng, dim, 0.2, 2));
    }
    std::vector<Label> perm{3, 0, 4, 1, 2}; // class c is stored as label perm[c]
    StatisticsStore a, b;
    for (std::size_t c = 0; c < n; ++c) {
        observe_pair(a, static_cast<Label>(c), means[c], stds[c]);
        observe_pair(b, perm[c], means[c], stds[c]);
    }
    const IsayModel ma(a), mb(b);
    const auto f = testing::random_vector(rng, dim, -3, 3);
    std::vector<double> ta(n), tb(n);
    ma.importance(f, ta);
    mb.importance(f, tb);
    for (std::size_t c = 0; c < n; ++c) {
        CHECK(ta[c] == tb[perm[c]]);
        for (std::size_t i = 0; i < dim; ++i) CHECK(ma.significance().row(c)[i] == mb.significance().row(perm[c])[i]);
    }
}

TEST_CASE("IsayModel agrees with the free functions") {
    std::mt19937_64 rng(9);
    StatisticsStore s;
    for (Label c = 0; c < 4; ++c) observe_pair(s, c * 3, testing::random_vector(rng, 5, -2, 2), testing::random_vector(rng, 5, 0.1, 1));
    const IsayModel model(s);
    const auto u = significance_matrix(s);
    const auto f = testing::random_vector(rng, 5, -2, 2);
    const auto gamma = weighted_distances(f, s, u);
    std::vector<double> tau(4);
    model.importance(f, tau);
    CHECK(tau == importance_vector(gamma).values);
}

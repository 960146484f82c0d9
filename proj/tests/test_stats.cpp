#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "otfcl/dataio.hpp"
#include "otfcl/errors.hpp"
#include "otfcl/stats.hpp"

#include <cmath>
#include <limits>

using namespace otfcl;
using testing::close_rel;

TEST_CASE("first observation initializes both moments") {
    StatisticsStore s;
    s.observe(3, std::vector<double>{1.0, 2.0});
    const auto& c = s.at(3);
    CHECK(c.prototype == std::vector<double>{1.0, 2.0});
    CHECK(c.sq_expectation == std::vector<double>{1.0, 4.0});
    CHECK(c.count == 1);
    CHECK(s.dim() == 2);
}

TEST_CASE("second observation gives the exact two-sample means") {
    StatisticsStore s;
    s.observe(3, std::vector<double>{1.0, 2.0});
    s.observe(3, std::vector<double>{3.0, 4.0});
    const auto& c = s.at(3);
    CHECK(c.prototype == std::vector<double>{2.0, 3.0});
    CHECK(c.sq_expectation == std::vector<double>{5.0, 10.0});
    CHECK(c.count == 2);
}

TEST_CASE("constant stream keeps the vector and its square") {
    StatisticsStore s;
    const std::vector<double> f{0.5, -1.5, 3.0};
    for (int i = 0; i < 5; ++i) s.observe(7, f);
    const auto& c = s.at(7);
    CHECK(c.count == 5);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(c.prototype[i] == doctest::Approx(f[i]).epsilon(1e-15));
        CHECK(c.sq_expectation[i] == doctest::Approx(f[i] * f[i]).epsilon(1e-15));
    }
}

TEST_CASE("std_of") {
    SUBCASE("samples 1 and 3 have population std 1") {
        StatisticsStore s;
        s.observe(0, std::vector<double>{1.0});
        s.observe(0, std::vector<double>{3.0});
        CHECK(s.at(0).prototype[0] == 2.0);
        CHECK(s.at(0).sq_expectation[0] == 5.0);
        CHECK(s.std_of(0) == std::vector<double>{1.0});
    }
    SUBCASE("constant class has zero std") {
        StatisticsStore s;
        s.observe(0, std::vector<double>{2.0, -4.0});
        CHECK(s.std_of(0) == std::vector<double>{0.0, 0.0});
    }
    SUBCASE("negative rounding residue clamps to zero") {
        StatisticsStore s;
        ClassStatistics c;
        c.class_id = 4;
        c.prototype = {1.0};
        c.sq_expectation = {1.0 - 1e-9};
        c.count = 3;
        s.restore(c);
        const auto r = s.std_of(4);
        CHECK(r[0] == 0.0);
    }
    SUBCASE("unseen class") {
        StatisticsStore s;
        CHECK_THROWS_AS(s.std_of(1), NotFoundError);
        s.observe(2, std::vector<double>{1.0});
        CHECK_THROWS_AS(s.std_of(1), NotFoundError);
    }
}

TEST_CASE("seen_classes is ascending and duplicate-free") {
    StatisticsStore s;
    CHECK(s.seen_classes().empty());
    s.observe(5, std::vector<double>{1.0});
    s.observe(1, std::vector<double>{1.0});
    CHECK(s.seen_classes() == std::vector<Label>{1, 5});

    StatisticsStore t;
    t.observe(1, std::vector<double>{1.0});
    t.observe(1, std::vector<double>{2.0});
    CHECK(t.seen_classes() == std::vector<Label>{1});
}

TEST_CASE("observe rejects bad input") {
    StatisticsStore s;
    s.observe(0, std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(s.observe(0, std::vector<double>{1.0}), DimensionError);
    CHECK_THROWS_AS(s.observe(1, std::vector<double>{1.0, 2.0, 3.0}), DimensionError);
    CHECK_THROWS_AS(s.observe(0, std::vector<double>{1.0, std::numeric_limits<double>::quiet_NaN()}),
                    InvalidArgument);
    CHECK_THROWS_AS(s.observe(0, std::vector<double>{std::numeric_limits<double>::infinity(), 0.0}),
                    InvalidArgument);
    // Rejected samples leave the state alone.
    CHECK(s.at(0).count == 1);
    CHECK_FALSE(s.contains(1));
}

TEST_CASE("property: moments match brute force and Welford over random streams") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 1 + rng() % 16;
        const std::size_t classes = 1 + rng() % 5;
        const std::size_t n = 1 + rng() % 2000;
        std::vector<std::vector<double>> centers;
        for (std::size_t c = 0; c < classes; ++c) centers.push_back(testing::random_vector(rng, dim, -5.0, 5.0));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> scale(0.1, 3.0);

        StatisticsStore s;
        std::vector<std::vector<std::vector<double>>> retained(classes);
        std::vector<testing::WelfordOracle> welford(classes);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t c = rng() % classes;
            std::vector<double> f(dim);
            for (std::size_t i = 0; i < dim; ++i) f[i] = centers[c][i] + scale(rng) * normal(rng);
            s.observe(static_cast<Label>(c), f);
            retained[c].push_back(f);
            welford[c].add(f);
        }
        for (std::size_t c = 0; c < classes; ++c) {
            if (retained[c].empty()) continue;
            const auto& st = s.at(static_cast<Label>(c));
            CHECK(st.count == retained[c].size());
            const auto mean = testing::brute_mean(retained[c]);
            const auto sq = testing::brute_mean(retained[c], true);
            const auto r = s.std_of(static_cast<Label>(c));
            for (std::size_t i = 0; i < dim; ++i) {
                CHECK(close_rel(st.prototype[i], mean[i], 1e-6));
                CHECK(close_rel(st.sq_expectation[i], sq[i], 1e-6));
                CHECK(st.sq_expectation[i] >= st.prototype[i] * st.prototype[i] - 1e-6);
                CHECK(close_rel(r[i], welford[c].population_std(i), 1e-6));
            }
        }
    }
}

TEST_CASE("property: mean is insensitive to observation order") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::vector<double>> xs;
        for (int k = 0; k < 500; ++k) xs.push_back(testing::random_vector(rng, 8, -3.0, 3.0));
        StatisticsStore a, b;
        for (const auto& x : xs) a.observe(0, x);
        std::shuffle(xs.begin(), xs.end(), rng);
        for (const auto& x : xs) b.observe(0, x);
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(std::abs(a.at(0).prototype[i] - b.at(0).prototype[i]) <= 1e-9);
            CHECK(std::abs(a.at(0).sq_expectation[i] - b.at(0).sq_expectation[i]) <= 1e-9);
        }
    }
}

TEST_CASE("state size does not grow with stream length") {
    std::mt19937_64 rng(5);
    StatisticsStore s;
    std::size_t last_size = 0;
    for (int round = 0; round < 3; ++round) {
        for (int k = 0; k < 1000; ++k) s.observe(static_cast<Label>(k % 4), testing::random_vector(rng, 6));
        const Bytes bytes = encode_checkpoint(s, LinearHead(6, s.seen_classes(), std::vector<double>(24, 0.0)),
                                              RunReport{});
        const CheckpointAudit audit = audit_checkpoint(bytes);
        CHECK(audit.classes == 4);
        CHECK(audit.statistic_vectors == 8);
        CHECK(audit.counters == 4);
        if (round > 0) {
            CHECK(bytes.size() == last_size);
        }
        last_size = bytes.size();
    }
}

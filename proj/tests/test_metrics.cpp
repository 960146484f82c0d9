#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "otfcl/errors.hpp"
#include "otfcl/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace otfcl;

namespace {

// One-hot weights: class c scores feature component c, so a test sample
// e_c is predicted as c with certainty.
LinearHead identity_head(std::size_t classes) {
    std::vector<double> w(classes * classes, 0.0);
    for (std::size_t c = 0; c < classes; ++c) w[c * classes + c] = 10.0;
    std::vector<Label> labels(classes);
    std::iota(labels.begin(), labels.end(), Label{0});
    return LinearHead(classes, labels, w);
}

FeatureSet unit_samples(std::size_t classes, std::span<const Label> labels_of_rows) {
    FeatureSet fs(classes);
    std::vector<double> x(classes);
    for (std::size_t r = 0; r < labels_of_rows.size(); ++r) {
        std::fill(x.begin(), x.end(), 0.0);
        x[r % classes] = 1.0;
        fs.push_back(labels_of_rows[r], x);
    }
    return fs;
}

StatisticsStore store_for(std::size_t classes) {
    StatisticsStore s;
    std::vector<double> x(classes);
    for (std::size_t c = 0; c < classes; ++c) {
        std::fill(x.begin(), x.end(), 0.0);
        x[c] = 1.0;
        s.observe(static_cast<Label>(c), x);
        x[c] = 1.5;
        s.observe(static_cast<Label>(c), x);
    }
    return s;
}

} // namespace

TEST_CASE("checkpoint accuracy examples") {
    const LinearHead head = identity_head(2);
    const StatisticsStore store = store_for(2);

    const std::vector<Label> right{0, 1, 0, 1};
    CHECK(evaluate_checkpoint(head, store, unit_samples(2, right), false) == 100.0);

    const std::vector<Label> half{0, 1, 1, 0};
    CHECK(evaluate_checkpoint(head, store, unit_samples(2, half), false) == 50.0);

    // Samples of unseen classes are left out of the denominator.
    const std::vector<Label> with_unseen{0, 1, 7};
    CHECK(evaluate_checkpoint(head, store, unit_samples(2, with_unseen), false) == 100.0);

    const std::vector<Label> only_unseen{5, 6};
    CHECK_THROWS_AS(evaluate_checkpoint(head, store, unit_samples(2, only_unseen), false), UndefinedMetricError);
    CHECK_THROWS_AS(evaluate_checkpoint(head, store, FeatureSet(2), false), UndefinedMetricError);
}

TEST_CASE("zero weights without the importance vector predict the first class") {
    for (std::size_t k : {2u, 3u, 5u, 10u}) {
        const FeatureSet test = testing::make_blobs(k, 20, 4, k);
        std::vector<Label> labels(k);
        std::iota(labels.begin(), labels.end(), Label{0});
        const LinearHead zero(4, labels, std::vector<double>(k * 4, 0.0));
        StatisticsStore store;
        for (std::size_t i = 0; i < test.size(); ++i) store.observe(test.labels[i], test.row(i));
        CHECK(evaluate_checkpoint(zero, store, test, false) == doctest::Approx(100.0 / static_cast<double>(k)));
    }
}

TEST_CASE("property: accuracy does not depend on test order") {
    std::mt19937_64 rng(3);
    const FeatureSet test = testing::make_blobs(4, 25, 3, 4, 1.0);
    StatisticsStore store;
    for (std::size_t i = 0; i < test.size(); ++i) store.observe(test.labels[i], test.row(i));
    const LinearHead head(3, {0, 1, 2, 3}, testing::random_vector(rng, 12));
    const double base_plain = evaluate_checkpoint(head, store, test, false);
    const double base_isay = evaluate_checkpoint(head, store, test, true);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::size_t> order(test.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        FeatureSet shuffled(test.dim);
        for (std::size_t i : order) shuffled.push_back(test.labels[i], test.row(i));
        CHECK(evaluate_checkpoint(head, store, shuffled, false) == base_plain);
        CHECK(evaluate_checkpoint(head, store, shuffled, true) == base_isay);
    }
}

TEST_CASE("finalize_report") {
    const std::vector<double> two{80.0, 60.0};
    const Summary s = finalize_report(two);
    CHECK(s.average == 70.0);
    CHECK(s.last == 60.0);

    const std::vector<double> one{42.5};
    CHECK(finalize_report(one).average == 42.5);
    CHECK(finalize_report(one).last == 42.5);

    CHECK_THROWS_AS(finalize_report(std::vector<double>{}), InvalidArgument);

    std::mt19937_64 rng(8);
    auto acc = testing::random_vector(rng, 9, 0.0, 100.0);
    const double average = finalize_report(acc).average;
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(acc.begin(), acc.end(), rng);
        CHECK(finalize_report(acc).average == doctest::Approx(average).epsilon(1e-14));
    }

    RunReport report;
    report.session_accuracies = {{10, 1, 90.0}, {20, 2, 50.0}};
    finalize_report(report);
    CHECK(report.last_accuracy == 50.0);
    CHECK(report.average_accuracy == 70.0);
}

TEST_CASE("report serialization") {
    RunReport report;
    report.session_accuracies = {{3, 1, 100.0}, {6, 2, 62.5}};
    report.seed = 17;
    report.steps = 6;
    report.samples = 300;
    report.config.ican.pseudo_per_real = 0.5;
    report.config.seed = 17;
    finalize_report(report);

    SUBCASE("json round trip") {
        const auto j = nlohmann::json::parse(summary_json(report));
        CHECK(j.at("last_accuracy").get<double>() == 62.5);
        CHECK(j.at("average_accuracy").get<double>() == 81.25);
        CHECK(j.at("seed").get<std::uint64_t>() == 17);
        CHECK(j.at("checkpoints").size() == 2);
        CHECK(run_report_from_json(j) == report);
        CHECK(summary_json(report).back() == '\n');
    }
    SUBCASE("csv layout") {
        std::istringstream in(metrics_csv(report));
        std::string line;
        std::getline(in, line);
        CHECK(line == "# seed=17");
        std::getline(in, line);
        CHECK(line.rfind("# config=", 0) == 0);
        CHECK(nlohmann::json::parse(line.substr(9)) == nlohmann::json::parse(to_json(report.config).dump()));
        std::getline(in, line);
        CHECK(line == "checkpoint,seen_classes,accuracy");
        std::getline(in, line);
        CHECK(line == "3,1,100");
        std::getline(in, line);
        CHECK(line == "6,2,62.5");
        CHECK_FALSE(std::getline(in, line));
    }
    SUBCASE("malformed json") {
        auto j = nlohmann::json::parse(summary_json(report));
        j.erase("steps");
        CHECK_THROWS_AS(run_report_from_json(j), FormatError);
        auto k = nlohmann::json::parse(summary_json(report));
        k["version"] = 2;
        CHECK_THROWS_AS(run_report_from_json(k), FormatError);
    }
}

TEST_CASE("run configuration json") {
    SUBCASE("defaults") {
        const RunConfig c = run_config_from_json(nlohmann::json::object());
        CHECK(c == RunConfig{});
        CHECK(c.optimizer.learning_rate == 0.02);
        CHECK(c.optimizer.weight_decay == 5e-5);
        CHECK(c.optimizer.beta == 2.0);
        CHECK(c.batch_size == 50);
        CHECK(c.ican.alpha == 1e-8);
    }
    SUBCASE("offline mode starts from the offline defaults") {
        const RunConfig c = run_config_from_json(nlohmann::json{{"mode", "offline"}});
        CHECK(c.mode == Mode::offline);
        CHECK(c.epochs == 40);
        CHECK(c.optimizer.learning_rate == 1e-3);
    }
    SUBCASE("round trip") {
        RunConfig c = RunConfig::offline_defaults();
        c.batch_size = 32;
        c.ican.generator = GeneratorKind::gaussian_noise;
        c.ican.pseudo_per_real = 2.0;
        c.isay_enabled = false;
        c.schedule.kind = ScheduleKind::gaussian;
        c.schedule.sigma = 0.25;
        c.schedule.eval_every = 4;
        c.low_data_fraction = 0.2;
        c.seed = 99;
        CHECK(run_config_from_json(nlohmann::json::parse(to_json(c).dump())) == c);
    }
    SUBCASE("invalid values") {
        CHECK_THROWS_AS(run_config_from_json(nlohmann::json{{"epochs", 3}}), InvalidArgument);
        CHECK_THROWS_AS(run_config_from_json(nlohmann::json{{"batch_size", 0}}), InvalidArgument);
        CHECK_THROWS_AS(run_config_from_json(nlohmann::json{{"low_data_fraction", 0.0}}), InvalidArgument);
    }
}

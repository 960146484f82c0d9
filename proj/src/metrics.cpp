#include "otfcl/metrics.hpp"

#include "otfcl/errors.hpp"
#include "otfcl/isay.hpp"
#include "otfcl/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <optional>

namespace otfcl {

double evaluate_checkpoint(const LinearHead& head, const StatisticsStore& store, const FeatureSet& test,
                           bool isay_enabled) {
    const auto seen = head.labels();
    std::vector<std::size_t> indices;
    indices.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        if (std::binary_search(seen.begin(), seen.end(), test.labels[i])) {
            indices.push_back(i);
        }
    }
    if (indices.empty()) {
        throw UndefinedMetricError("no test samples belong to the seen classes");
    }
    std::optional<IsayModel> isay;
    if (isay_enabled) {
        isay.emplace(store);
    }
    const std::size_t correct = kernels::count_correct(head, isay ? &*isay : nullptr, test, indices);
    return 100.0 * static_cast<double>(correct) / static_cast<double>(indices.size());
}

Summary finalize_report(std::span<const double> accuracies) {
    if (accuracies.empty()) {
        throw InvalidArgument("a report needs at least one checkpoint");
    }
    Summary s;
    s.last = accuracies.back();
    s.average = std::accumulate(accuracies.begin(), accuracies.end(), 0.0) / static_cast<double>(accuracies.size());
    return s;
}

void finalize_report(RunReport& report) {
    std::vector<double> acc;
    acc.reserve(report.session_accuracies.size());
    for (const auto& c : report.session_accuracies) {
        acc.push_back(c.accuracy);
    }
    const Summary s = finalize_report(acc);
    report.last_accuracy = s.last;
    report.average_accuracy = s.average;
}

nlohmann::ordered_json to_json(const RunReport& report) {
    nlohmann::ordered_json checkpoints = nlohmann::ordered_json::array();
    for (const auto& c : report.session_accuracies) {
        checkpoints.push_back(
            {{"checkpoint", c.checkpoint}, {"seen_classes", c.seen_classes}, {"accuracy", c.accuracy}});
    }
    return {
        {"version", 1},
        {"seed", report.seed},
        {"last_accuracy", report.last_accuracy},
        {"average_accuracy", report.average_accuracy},
        {"steps", report.steps},
        {"samples", report.samples},
        {"checkpoints", checkpoints},
        {"config", to_json(report.config)},
    };
}

RunReport run_report_from_json(const nlohmann::json& j) {
    try {
        if (j.at("version").get<int>() != 1) {
            throw FormatError("unsupported report version");
        }
        RunReport r;
        r.seed = j.at("seed").get<std::uint64_t>();
        r.last_accuracy = j.at("last_accuracy").get<double>();
        r.average_accuracy = j.at("average_accuracy").get<double>();
        r.steps = j.at("steps").get<std::uint64_t>();
        r.samples = j.at("samples").get<std::uint64_t>();
        for (const auto& c : j.at("checkpoints")) {
            r.session_accuracies.push_back({c.at("checkpoint").get<std::size_t>(),
                                            c.at("seen_classes").get<std::size_t>(),
                                            c.at("accuracy").get<double>()});
        }
        r.config = run_config_from_json(j.at("config"));
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed run report: ") + e.what());
    }
}

std::string summary_json(const RunReport& report) {
    return to_json(report).dump(2) + "\n";
}

namespace {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace

std::string metrics_csv(const RunReport& report) {
    std::string out;
    out += "# seed=" + std::to_string(report.seed) + "\n";
    out += "# config=" + to_json(report.config).dump() + "\n";
    out += "checkpoint,seen_classes,accuracy\n";
    for (const auto& c : report.session_accuracies) {
        out += std::to_string(c.checkpoint) + "," + std::to_string(c.seen_classes) + "," + format_double(c.accuracy) +
               "\n";
    }
    return out;
}

} // namespace otfcl

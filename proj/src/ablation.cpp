#include "otfcl/ablation.hpp"

#include "otfcl/errors.hpp"
#include "otfcl/protocol.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

namespace otfcl {

std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::naive: return "naive";
    case Variant::ican_only: return "ican_only";
    case Variant::isay_only: return "isay_only";
    case Variant::full: return "full";
    }
    return "unknown";
}

RunConfig with_variant(RunConfig base, Variant v) {
    base.ican.enabled = v == Variant::ican_only || v == Variant::full;
    base.isay_enabled = v == Variant::isay_only || v == Variant::full;
    return base;
}

SeedStats seed_stats(const std::vector<double>& values) {
    if (values.empty()) {
        throw InvalidArgument("no runs to summarize");
    }
    SeedStats s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

AblationCell run_cell(const FeatureSet& train, const FeatureSet& test, const RunConfig& config, std::size_t runs,
                      std::string group, std::string variant) {
    if (runs == 0) {
        throw InvalidArgument("an ablation cell needs at least one run");
    }
    AblationCell cell{std::move(group), std::move(variant), config, {}, {}};
    for (std::size_t r = 0; r < runs; ++r) {
        RunConfig c = config;
        c.seed = config.seed + r;
        const RunResult result = run_experiment(train, test, c);
        cell.last.push_back(result.report.last_accuracy);
        cell.average.push_back(result.report.average_accuracy);
    }
    return cell;
}

std::vector<AblationCell> run_ablation(const FeatureSet& train, const FeatureSet& test, const RunConfig& base,
                                       const AblationOptions& options) {
    std::vector<AblationCell> cells;
    for (Variant v : {Variant::naive, Variant::ican_only, Variant::isay_only, Variant::full}) {
        cells.push_back(run_cell(train, test, with_variant(base, v), options.runs, "component",
                                 std::string(to_string(v))));
    }
    if (options.quantity_sweep) {
        for (double p : kQuantitySweep) {
            RunConfig c = with_variant(base, Variant::full);
            c.ican.pseudo_per_real = p;
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof(buf), p);
            cells.push_back(run_cell(train, test, c, options.runs, "quantity", "p=" + std::string(buf, res.ptr)));
        }
    }
    if (options.generator_sweep) {
        for (GeneratorKind g : {GeneratorKind::analogical, GeneratorKind::gaussian_noise}) {
            RunConfig c = with_variant(base, Variant::ican_only);
            c.ican.generator = g;
            cells.push_back(run_cell(train, test, c, options.runs, "generator", std::string(to_string(g))));
        }
    }
    return cells;
}

namespace {

std::string num(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace

std::string ablation_csv(const std::vector<AblationCell>& cells, const RunConfig& base, std::size_t runs) {
    std::string out;
    out += "# seeds=" + std::to_string(base.seed) + ".." + std::to_string(base.seed + runs - 1) + "\n";
    out += "# config=" + to_json(base).dump() + "\n";
    out += "group,variant,ican,isay,generator,pseudo_per_real,runs,last_mean,last_std,average_mean,average_std\n";
    for (const auto& c : cells) {
        const SeedStats last = seed_stats(c.last);
        const SeedStats avg = seed_stats(c.average);
        out += c.group + "," + c.variant + "," + (c.config.ican.enabled ? "1" : "0") + "," +
               (c.config.isay_enabled ? "1" : "0") + "," + std::string(to_string(c.config.ican.generator)) + "," +
               num(c.config.ican.pseudo_per_real) + "," + std::to_string(c.last.size()) + "," + num(last.mean) + "," +
               num(last.std) + "," + num(avg.mean) + "," + num(avg.std) + "\n";
    }
    return out;
}

} // namespace otfcl

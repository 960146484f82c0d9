#include "commands.hpp"

#include "otfcl/ablation.hpp"
#include "otfcl/dataio.hpp"
#include "otfcl/errors.hpp"
#include "otfcl/metrics.hpp"
#include "otfcl/protocol.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace otfcl::cli {

namespace fs = std::filesystem;

namespace {

nlohmann::json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(path.string() + ": " + e.what());
    }
}

void apply(RunConfig& c, const Toggles& t) {
    if (t.seed) c.seed = *t.seed;
    if (t.no_ican) c.ican.enabled = false;
    if (t.no_isay) c.isay_enabled = false;
    if (t.generator) c.ican.generator = parse_generator_kind(*t.generator);
    if (t.pseudo_per_real) c.ican.pseudo_per_real = *t.pseudo_per_real;
    if (t.low_data) c.low_data_fraction = *t.low_data;
    c.validate();
}

template <typename Fn>
int guarded(const char* command, Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "otfcl " << command << ": " << e.what() << "\n";
        return 1;
    }
}

} // namespace

ExperimentInput load_experiment(const fs::path& config_path, const Toggles& toggles) {
    const nlohmann::json j = read_json(config_path);
    ExperimentInput in;
    in.config = run_config_from_json(j);
    apply(in.config, toggles);

    const auto data = j.find("data");
    if (data == j.end() || !data->is_object()) {
        throw InvalidArgument(config_path.string() + ": missing \"data\" section");
    }
    if (auto synth = data->find("synthetic"); synth != data->end()) {
        std::tie(in.train, in.test) = generate_synthetic(synthetic_spec_from_json(*synth));
    } else {
        const fs::path base = config_path.parent_path();
        in.train = read_dump(base / data->at("train").get<std::string>());
        in.test = read_dump(base / data->at("test").get<std::string>());
    }
    if (in.train.dim != in.test.dim) {
        throw DimensionError("train features have " + std::to_string(in.train.dim) + " dimensions, test features " +
                             std::to_string(in.test.dim));
    }
    return in;
}

fs::path resolve_output_dir(const std::string& flag) {
    if (!flag.empty()) {
        return flag;
    }
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return "otfcl-out";
}

int run_train(const TrainArgs& args) {
    return guarded("train", [&] {
        const ExperimentInput in = load_experiment(args.config, args.toggles);
        const RunResult result = run_experiment(in.train, in.test, in.config);
        const fs::path out = resolve_output_dir(args.output_dir);
        fs::create_directories(out);
        write_text(out / "metrics.csv", metrics_csv(result.report));
        write_text(out / "summary.json", summary_json(result.report));
        save_checkpoint(out / "checkpoint.i2ck", result.store, result.head, result.report);
        std::cout << "last_accuracy=" << result.report.last_accuracy
                  << " average_accuracy=" << result.report.average_accuracy << " -> " << out.string() << "\n";
    });
}

int run_ablate(const AblateArgs& args) {
    return guarded("ablate", [&] {
        const ExperimentInput in = load_experiment(args.config, args.toggles);
        AblationOptions options;
        options.runs = args.runs;
        options.quantity_sweep = args.sweep;
        options.generator_sweep = args.generators;
        const auto cells = run_ablation(in.train, in.test, in.config, options);
        const fs::path out = resolve_output_dir(args.output_dir);
        fs::create_directories(out);
        const std::string csv = ablation_csv(cells, in.config, args.runs);
        write_text(out / "ablation.csv", csv);
        std::cout << csv;
    });
}

int run_synth(const SynthArgs& args) {
    return guarded("synth", [&] {
        SyntheticSpec spec = synthetic_spec_from_json(read_json(args.spec));
        if (args.seed) {
            spec.seed = *args.seed;
        }
        const auto [train, test] = generate_synthetic(spec);
        const fs::path out = resolve_output_dir(args.output_dir);
        fs::create_directories(out);
        write_dump(out / "train.i2fv", train);
        write_dump(out / "test.i2fv", test);
        write_text(out / "synth.json", to_json(spec).dump(2) + "\n");
        std::cout << "wrote " << train.size() << " train and " << test.size() << " test records (dim "
                  << spec.dim << ") to " << out.string() << "\n";
    });
}

int run_eval(const EvalArgs& args) {
    return guarded("eval", [&] {
        const EngineState state = load_checkpoint(args.checkpoint);
        const FeatureSet test = read_dump(args.test);
        if (test.dim != state.head.dim()) {
            throw DimensionError("test dump has " + std::to_string(test.dim) + " dimensions, checkpoint has " +
                                 std::to_string(state.head.dim()));
        }
        const bool isay = state.report.config.isay_enabled && !args.no_isay;
        const double acc = evaluate_checkpoint(state.head, state.store, test, isay);
        nlohmann::ordered_json j = {
            {"accuracy", acc},
            {"seen_classes", state.head.class_count()},
            {"isay", isay},
            {"seed", state.report.seed},
            {"config", to_json(state.report.config)},
        };
        std::cout << j.dump(2) << "\n";
    });
}

} // namespace otfcl::cli

#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_toggles(CLI::App* cmd, otfcl::cli::Toggles& t) {
    cmd->add_option("--seed", t.seed, "Override the root seed");
    cmd->add_flag("--no-ican", t.no_ican, "Disable pseudo-feature generation");
    cmd->add_flag("--no-isay", t.no_isay, "Disable the importance-vector correction");
    cmd->add_option("--generator", t.generator, "Pseudo-feature generator")
        ->check(CLI::IsMember({"analogical", "gaussian"}));
    cmd->add_option("--pseudo-per-real", t.pseudo_per_real, "Pseudo-features per real feature");
    cmd->add_option("--low-data", t.low_data, "Fraction of training data kept per class");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online task-free continual learning engine"};
    app.require_subcommand(1);

    otfcl::cli::TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Run one experiment and write metrics, summary and checkpoint");
    train_cmd->add_option("-c,--config", train.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("-o,--output-dir", train.output_dir, "Output directory");
    add_toggles(train_cmd, train.toggles);

    otfcl::cli::AblateArgs ablate;
    auto* ablate_cmd = app.add_subcommand("ablate", "Run the component grid (and optional sweeps) over several seeds");
    ablate_cmd->add_option("-c,--config", ablate.config, "Run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    ablate_cmd->add_option("-o,--output-dir", ablate.output_dir, "Output directory");
    ablate_cmd->add_option("-r,--runs", ablate.runs, "Seeds per cell")->check(CLI::PositiveNumber);
    ablate_cmd->add_flag("--sweep", ablate.sweep, "Add the pseudo-feature quantity sweep");
    ablate_cmd->add_flag("--generators", ablate.generators, "Compare analogical and Gaussian-noise generation");
    add_toggles(ablate_cmd, ablate.toggles);

    otfcl::cli::SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Write synthetic train/test feature dumps");
    synth_cmd->add_option("-s,--spec", synth.spec, "Synthetic spec (JSON)")->required()->check(CLI::ExistingFile);
    synth_cmd->add_option("-o,--output-dir", synth.output_dir, "Output directory");
    synth_cmd->add_option("--seed", synth.seed, "Override the spec seed");

    otfcl::cli::EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a feature dump");
    eval_cmd->add_option("-k,--checkpoint", eval.checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("-t,--test", eval.test, "Test feature dump")->required()->check(CLI::ExistingFile);
    eval_cmd->add_flag("--no-isay", eval.no_isay, "Disable the importance-vector correction");

    CLI11_PARSE(app, argc, argv);

    if (*train_cmd) return otfcl::cli::run_train(train);
    if (*ablate_cmd) return otfcl::cli::run_ablate(ablate);
    if (*synth_cmd) return otfcl::cli::run_synth(synth);
    if (*eval_cmd) return otfcl::cli::run_eval(eval);
    return 2;
}

#include "otfcl/config.hpp"

#include "otfcl/errors.hpp"

#include <cmath>
#include <string>

namespace otfcl {

std::string_view to_string(Mode mode) {
    return mode == Mode::online ? "online" : "offline";
}

std::string_view to_string(ScheduleKind kind) {
    return kind == ScheduleKind::step ? "step" : "gaussian";
}

void RunConfig::validate() const {
    if (mode == Mode::online && epochs != 1) {
        throw InvalidArgument("online runs train for exactly one epoch");
    }
    if (epochs == 0) {
        throw InvalidArgument("epochs must be positive");
    }
    if (batch_size == 0) {
        throw InvalidArgument("batch_size must be positive");
    }
    optimizer.validate();
    ican.validate();
    if (schedule.kind == ScheduleKind::step && schedule.step == 0) {
        throw InvalidArgument("schedule.step must be positive");
    }
    if (schedule.kind == ScheduleKind::gaussian) {
        if (!(schedule.sigma > 0.0) || !std::isfinite(schedule.sigma)) {
            throw InvalidArgument("schedule.sigma must be positive");
        }
        if (schedule.eval_every == 0) {
            throw InvalidArgument("schedule.eval_every must be positive");
        }
    }
    if (!(low_data_fraction > 0.0 && low_data_fraction <= 1.0)) {
        throw InvalidArgument("low_data_fraction must lie in (0, 1]");
    }
}

RunConfig RunConfig::offline_defaults() {
    RunConfig c;
    c.mode = Mode::offline;
    c.epochs = 40;
    c.optimizer.learning_rate = 1e-3;
    return c;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json schedule;
    schedule["kind"] = to_string(c.schedule.kind);
    schedule["step"] = c.schedule.step;
    schedule["sigma"] = c.schedule.sigma;
    schedule["eval_every"] = c.schedule.eval_every;
    return {
        {"version", kConfigVersion},
        {"mode", to_string(c.mode)},
        {"epochs", c.epochs},
        {"batch_size", c.batch_size},
        {"optimizer",
         {{"learning_rate", c.optimizer.learning_rate},
          {"weight_decay", c.optimizer.weight_decay},
          {"beta", c.optimizer.beta}}},
        {"ican",
         {{"enabled", c.ican.enabled},
          {"alpha", c.ican.alpha},
          {"pseudo_per_real", c.ican.pseudo_per_real},
          {"generator", to_string(c.ican.generator)}}},
        {"isay", {{"enabled", c.isay_enabled}}},
        {"schedule", schedule},
        {"low_data_fraction", c.low_data_fraction},
        {"seed", c.seed},
    };
}

namespace {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) {
        try {
            out = it->get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
        }
    }
}

} // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw InvalidArgument("run configuration must be a JSON object");
    }
    int version = kConfigVersion;
    read_opt(j, "version", version);
    if (version != kConfigVersion) {
        throw InvalidArgument("unsupported config version " + std::to_string(version));
    }

    RunConfig c;
    std::string mode = "online";
    read_opt(j, "mode", mode);
    if (mode == "offline") {
        c = RunConfig::offline_defaults();
    } else if (mode != "online") {
        throw InvalidArgument("mode must be 'online' or 'offline', got '" + mode + "'");
    }
    read_opt(j, "epochs", c.epochs);
    read_opt(j, "batch_size", c.batch_size);
    read_opt(j, "low_data_fraction", c.low_data_fraction);
    read_opt(j, "seed", c.seed);

    if (auto it = j.find("optimizer"); it != j.end()) {
        read_opt(*it, "learning_rate", c.optimizer.learning_rate);
        read_opt(*it, "weight_decay", c.optimizer.weight_decay);
        read_opt(*it, "beta", c.optimizer.beta);
    }
    if (auto it = j.find("ican"); it != j.end()) {
        read_opt(*it, "enabled", c.ican.enabled);
        read_opt(*it, "alpha", c.ican.alpha);
        read_opt(*it, "pseudo_per_real", c.ican.pseudo_per_real);
        std::string gen(to_string(c.ican.generator));
        read_opt(*it, "generator", gen);
        c.ican.generator = parse_generator_kind(gen);
    }
    if (auto it = j.find("isay"); it != j.end()) {
        read_opt(*it, "enabled", c.isay_enabled);
    }
    if (auto it = j.find("schedule"); it != j.end()) {
        std::string kind = "step";
        read_opt(*it, "kind", kind);
        if (kind == "step") {
            c.schedule.kind = ScheduleKind::step;
        } else if (kind == "gaussian") {
            c.schedule.kind = ScheduleKind::gaussian;
        } else {
            throw InvalidArgument("schedule.kind must be 'step' or 'gaussian', got '" + kind + "'");
        }
        read_opt(*it, "step", c.schedule.step);
        read_opt(*it, "sigma", c.schedule.sigma);
        read_opt(*it, "eval_every", c.schedule.eval_every);
    }
    c.validate();
    return c;
}

} // namespace otfcl

#include "otfcl/protocol.hpp"

#include "otfcl/errors.hpp"
#include "otfcl/ican.hpp"
#include "otfcl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace otfcl {

std::size_t StreamSchedule::sample_count() const {
    std::size_t n = 0;
    for (const auto& b : batches) {
        n += b.size();
    }
    return n;
}

namespace {

void append_chunks(StreamSchedule& out, const std::vector<Sample>& stream, std::size_t batch_size) {
    for (std::size_t begin = 0; begin < stream.size(); begin += batch_size) {
        const std::size_t end = std::min(stream.size(), begin + batch_size);
        out.batches.emplace_back(stream.begin() + static_cast<std::ptrdiff_t>(begin),
                                 stream.begin() + static_cast<std::ptrdiff_t>(end));
    }
}

std::map<Label, std::vector<std::size_t>> indices_by_class(const FeatureSet& data) {
    std::map<Label, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < data.size(); ++i) {
        by_class[data.labels[i]].push_back(i);
    }
    return by_class;
}

} // namespace

StreamSchedule make_step_schedule(const FeatureSet& data, std::size_t step, std::size_t batch_size,
                                  std::uint64_t seed) {
    if (data.empty()) {
        throw InvalidArgument("cannot schedule an empty dataset");
    }
    if (step == 0 || batch_size == 0) {
        throw InvalidArgument("step and batch size must be positive");
    }
    const auto by_class = indices_by_class(data);
    if (step > by_class.size()) {
        throw InvalidArgument("step " + std::to_string(step) + " exceeds the " + std::to_string(by_class.size()) +
                              " classes in the dataset");
    }

    StreamSchedule out;
    out.batch_size = batch_size;
    out.seed = seed;
    Rng rng = make_rng(seed, "step-schedule");
    auto it = by_class.begin();
    while (it != by_class.end()) {
        std::vector<Sample> session;
        for (std::size_t k = 0; k < step && it != by_class.end(); ++k, ++it) {
            for (std::size_t idx : it->second) {
                session.push_back({idx, it->first});
            }
        }
        std::shuffle(session.begin(), session.end(), rng);
        append_chunks(out, session, batch_size);
        out.session_ends.push_back(out.batches.size());
    }
    return out;
}

StreamSchedule make_gaussian_schedule(const FeatureSet& data, double sigma, std::size_t batch_size,
                                      std::uint64_t seed, std::size_t eval_every) {
    if (data.empty()) {
        throw InvalidArgument("cannot schedule an empty dataset");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("sigma must be positive");
    }
    if (batch_size == 0 || eval_every == 0) {
        throw InvalidArgument("batch size and evaluation interval must be positive");
    }
    const std::vector<Label> classes = data.classes();
    std::map<Label, double> centers;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        centers[classes[c]] =
            classes.size() == 1 ? 0.5 : static_cast<double>(c) / static_cast<double>(classes.size() - 1);
    }

    Rng rng = make_rng(seed, "gaussian-schedule");
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> position(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        position[i] = centers[data.labels[i]] + sigma * noise(rng);
    }
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return position[a] != position[b] ? position[a] < position[b] : a < b;
    });

    std::vector<Sample> stream;
    stream.reserve(order.size());
    for (std::size_t idx : order) {
        stream.push_back({idx, data.labels[idx]});
    }

    StreamSchedule out;
    out.batch_size = batch_size;
    out.seed = seed;
    append_chunks(out, stream, batch_size);
    for (std::size_t end = eval_every; end < out.batches.size(); end += eval_every) {
        out.session_ends.push_back(end);
    }
    out.session_ends.push_back(out.batches.size());
    return out;
}

FeatureSet subsample_low_data(const FeatureSet& data, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw InvalidArgument("low-data fraction must lie in (0, 1]");
    }
    if (fraction == 1.0) {
        return data;
    }
    Rng rng = make_rng(seed, "low-data");
    std::vector<std::size_t> keep;
    for (auto& [label, idx] : indices_by_class(data)) {
        // Tolerance keeps 0.1 * 500 at 50 despite binary rounding.
        const auto wanted = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(idx.size()) - 1e-9));
        std::shuffle(idx.begin(), idx.end(), rng);
        keep.insert(keep.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(wanted));
    }
    std::sort(keep.begin(), keep.end());
    FeatureSet out(data.dim);
    for (std::size_t i : keep) {
        out.push_back(data.labels[i], data.row(i));
    }
    return out;
}

StreamSchedule make_schedule(const FeatureSet& data, const RunConfig& config) {
    if (config.schedule.kind == ScheduleKind::step) {
        return make_step_schedule(data, config.schedule.step, config.batch_size, config.seed);
    }
    return make_gaussian_schedule(data, config.schedule.sigma, config.batch_size, config.seed,
                                  config.schedule.eval_every);
}

Learner::Learner(RunConfig config) {
    config.validate();
    report_.seed = config.seed;
    report_.config = std::move(config);
}

Learner::Learner(StatisticsStore store, LinearHead head, RunReport report)
    : store_(std::move(store)), head_(std::move(head)), report_(std::move(report)) {
    report_.config.validate();
    const auto seen = store_.seen_classes();
    if (!std::equal(seen.begin(), seen.end(), head_.labels().begin(), head_.labels().end())) {
        throw InvalidState("statistics and classifier cover different classes");
    }
    if (!store_.empty() && store_.dim() != head_.dim()) {
        throw DimensionError("statistics and classifier dimensions differ");
    }
}

StepResult Learner::train_batch(const FeatureSet& data, std::span<const Sample> batch, bool observe) {
    if (batch.empty()) {
        return {};
    }
    if (head_.dim() == 0 && head_.class_count() == 0) {
        head_ = LinearHead(data.dim);
    }
    if (data.dim != head_.dim()) {
        throw DimensionError("dataset has " + std::to_string(data.dim) + " dimensions, engine state has " +
                             std::to_string(head_.dim()));
    }
    for (const Sample& s : batch) {
        if (s.index >= data.size() || data.labels[s.index] != s.label) {
            throw InvalidArgument("schedule entry does not match the dataset");
        }
    }

    std::vector<Label> fresh;
    for (const Sample& s : batch) {
        if (!head_.index_of(s.label) && std::find(fresh.begin(), fresh.end(), s.label) == fresh.end()) {
            fresh.push_back(s.label);
        }
    }
    head_.expand_classes(fresh);

    if (observe) {
        for (const Sample& s : batch) {
            store_.observe(s.label, data.row(s.index));
        }
    }

    std::vector<RealSample> real;
    real.reserve(batch.size());
    for (const Sample& s : batch) {
        real.push_back({data.row(s.index), s.label});
    }
    Rng rng = make_rng(report_.seed, "ican", report_.steps);
    const std::vector<PseudoFeature> pseudo = generate_pseudo_batch(store_, real, report_.config.ican, rng);

    std::vector<LabeledFeature> real_in;
    real_in.reserve(real.size());
    for (const auto& r : real) {
        real_in.push_back({r.feature, r.label});
    }
    std::vector<LabeledFeature> pseudo_in;
    pseudo_in.reserve(pseudo.size());
    for (const auto& p : pseudo) {
        pseudo_in.push_back({p.vector, p.label});
    }

    const StepResult result = sgd_batch_step(head_, real_in, pseudo_in, report_.config.optimizer);
    ++report_.steps;
    report_.samples += batch.size();
    return result;
}

double Learner::record_checkpoint(const FeatureSet& test) {
    const double acc = evaluate_checkpoint(head_, store_, test, report_.config.isay_enabled);
    report_.session_accuracies.push_back({static_cast<std::size_t>(report_.steps), head_.class_count(), acc});
    finalize_report(report_);
    return acc;
}

std::vector<PassLoss> run_sessions(Learner& learner, const StreamSchedule& schedule, const FeatureSet& train,
                                   const FeatureSet& test, std::size_t first_session, std::size_t last_session) {
    if (last_session > schedule.session_ends.size() || first_session > last_session) {
        throw InvalidArgument("session range outside the schedule");
    }
    const std::size_t epochs = learner.config().mode == Mode::online ? 1 : learner.config().epochs;
    std::vector<PassLoss> losses;
    for (std::size_t s = first_session; s < last_session; ++s) {
        const std::size_t begin = s == 0 ? 0 : schedule.session_ends[s - 1];
        const std::size_t end = schedule.session_ends[s];
        for (std::size_t e = 0; e < epochs; ++e) {
            double total = 0.0;
            std::size_t n = 0;
            for (std::size_t b = begin; b < end; ++b) {
                const auto& batch = schedule.batches[b];
                const StepResult r = learner.train_batch(train, batch, e == 0);
                total += r.real_loss * static_cast<double>(batch.size());
                n += batch.size();
            }
            losses.push_back({s, e, n == 0 ? 0.0 : total / static_cast<double>(n)});
        }
        if (!test.empty()) {
            learner.record_checkpoint(test);
        }
    }
    return losses;
}

namespace {

RunResult run_all(const StreamSchedule& schedule, const FeatureSet& train, const FeatureSet& test,
                  const RunConfig& config) {
    Learner learner(config);
    RunResult out;
    out.pass_losses = run_sessions(learner, schedule, train, test, 0, schedule.session_ends.size());
    out.head = learner.head();
    out.store = learner.store();
    out.report = learner.report();
    return out;
}

} // namespace

RunResult train_online(const StreamSchedule& schedule, const FeatureSet& train, const FeatureSet& test,
                       const RunConfig& config) {
    if (config.mode != Mode::online) {
        throw InvalidArgument("train_online needs an online configuration");
    }
    return run_all(schedule, train, test, config);
}

RunResult train_offline(const StreamSchedule& schedule, const FeatureSet& train, const FeatureSet& test,
                        const RunConfig& config) {
    if (config.mode != Mode::offline) {
        throw InvalidArgument("train_offline needs an offline configuration");
    }
    return run_all(schedule, train, test, config);
}

RunResult run_experiment(const FeatureSet& train, const FeatureSet& test, const RunConfig& config) {
    config.validate();
    const FeatureSet subset = subsample_low_data(train, config.low_data_fraction, config.seed);
    const StreamSchedule schedule = make_schedule(subset, config);
    return config.mode == Mode::online ? train_online(schedule, subset, test, config)
                                       : train_offline(schedule, subset, test, config);
}

} // namespace otfcl

#include "otfcl/dataio.hpp"

#include "otfcl/errors.hpp"
#include "otfcl/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

namespace otfcl {

namespace {

class ByteWriter {
public:
    explicit ByteWriter(Bytes& out) : out_(out) {}

    void raw(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }

    template <typename U>
    void uint(U v) {
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }

    void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

private:
    Bytes& out_;
};

class ByteReader {
public:
    ByteReader(const Bytes& in, const char* what) : in_(in), what_(what) {}

    std::size_t remaining() const { return in_.size() - pos_; }
    std::size_t position() const { return pos_; }

    void need(std::size_t n) const {
        if (remaining() < n) {
            throw TruncatedError(std::string(what_) + " is truncated at byte " + std::to_string(in_.size()) +
                                 " (needed " + std::to_string(n) + " more)");
        }
    }

    std::string raw(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
        pos_ += n;
        return s;
    }

    template <typename U>
    U uint() {
        need(sizeof(U));
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            v |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
        }
        pos_ += sizeof(U);
        return v;
    }

    float f32() { return std::bit_cast<float>(uint<std::uint32_t>()); }
    double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }

private:
    const Bytes& in_;
    const char* what_;
    std::size_t pos_ = 0;
};

void check_magic(ByteReader& r, const char (&expected)[4], const char* what) {
    r.need(4);
    const std::string magic = r.raw(4);
    if (std::memcmp(magic.data(), expected, 4) != 0) {
        std::string shown;
        for (char c : magic) {
            shown += std::isprint(static_cast<unsigned char>(c)) ? c : '?';
        }
        throw BadMagicError(std::string(what) + " has bad magic '" + shown + "', expected '" +
                            std::string(expected, 4) + "'");
    }
}

double finite_or_throw(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw NonFiniteError(std::string(what) + " contains a non-finite value");
    }
    return v;
}

} // namespace

Bytes encode_dump(const FeatureSet& data) {
    if (data.dim == 0) {
        throw DimensionError("cannot write a dump with zero dimensions");
    }
    if (data.values.size() != data.size() * data.dim) {
        throw DimensionError("feature set values do not match labels x dim");
    }
    Bytes out;
    out.reserve(20 + data.size() * (4 + 4 * data.dim));
    ByteWriter w(out);
    w.raw(kDumpMagic, 4);
    w.uint<std::uint32_t>(kDumpVersion);
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(data.dim));
    w.uint<std::uint64_t>(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        w.uint<std::uint32_t>(data.labels[i]);
        for (double v : data.row(i)) {
            const auto f = static_cast<float>(v);
            if (!std::isfinite(f)) {
                throw NonFiniteError("record " + std::to_string(i) + " has a non-finite value");
            }
            w.f32(f);
        }
    }
    return out;
}

FeatureSet decode_dump(const Bytes& bytes) {
    ByteReader r(bytes, "feature dump");
    check_magic(r, kDumpMagic, "feature dump");
    const auto version = r.uint<std::uint32_t>();
    if (version != kDumpVersion) {
        throw VersionError("feature dump version " + std::to_string(version) + " is not supported (expected " +
                           std::to_string(kDumpVersion) + ")");
    }
    const auto dim = r.uint<std::uint32_t>();
    const auto count = r.uint<std::uint64_t>();
    if (dim == 0) {
        throw FormatError("feature dump declares zero dimensions");
    }
    const std::uint64_t record_bytes = 4 + 4 * static_cast<std::uint64_t>(dim);
    if (count > r.remaining() / record_bytes) {
        throw TruncatedError("feature dump declares " + std::to_string(count) + " records but holds " +
                             std::to_string(r.remaining() / record_bytes));
    }
    if (r.remaining() != count * record_bytes) {
        throw FormatError("feature dump has " + std::to_string(r.remaining() - count * record_bytes) +
                          " trailing bytes after " + std::to_string(count) + " records");
    }
    FeatureSet out(dim);
    out.labels.reserve(count);
    out.values.reserve(count * dim);
    for (std::uint64_t i = 0; i < count; ++i) {
        out.labels.push_back(r.uint<std::uint32_t>());
        for (std::uint32_t k = 0; k < dim; ++k) {
            const float v = r.f32();
            if (!std::isfinite(v)) {
                throw NonFiniteError("record " + std::to_string(i) + " has a non-finite value");
            }
            out.values.push_back(v);
        }
    }
    return out;
}

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const Bytes& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    write_file(path, Bytes(text.begin(), text.end()));
}

void write_dump(const std::filesystem::path& path, const FeatureSet& data) {
    write_file(path, encode_dump(data));
}

FeatureSet read_dump(const std::filesystem::path& path) {
    return decode_dump(read_file(path));
}

Bytes encode_checkpoint(const StatisticsStore& store, const LinearHead& head, const RunReport& report) {
    const auto seen = store.seen_classes();
    if (!std::equal(seen.begin(), seen.end(), head.labels().begin(), head.labels().end())) {
        throw InvalidState("statistics and classifier cover different classes");
    }
    const std::size_t dim = store.empty() ? head.dim() : store.dim();
    if (!store.empty() && head.dim() != dim) {
        throw DimensionError("statistics and classifier dimensions differ");
    }
    const std::string report_json = to_json(report).dump();

    Bytes out;
    ByteWriter w(out);
    w.raw(kCheckpointMagic, 4);
    w.uint<std::uint32_t>(kCheckpointVersion);
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(dim));
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(seen.size()));
    for (const auto& [label, s] : store.classes()) {
        w.uint<std::uint32_t>(label);
        w.uint<std::uint64_t>(s.count);
        for (double v : s.prototype) w.f64(v);
        for (double v : s.sq_expectation) w.f64(v);
    }
    for (Label l : head.labels()) {
        w.uint<std::uint32_t>(l);
    }
    for (double v : head.weights()) {
        w.f64(v);
    }
    w.uint<std::uint64_t>(report_json.size());
    w.raw(report_json.data(), report_json.size());
    return out;
}

EngineState decode_checkpoint(const Bytes& bytes) {
    ByteReader r(bytes, "checkpoint");
    check_magic(r, kCheckpointMagic, "checkpoint");
    const auto version = r.uint<std::uint32_t>();
    if (version != kCheckpointVersion) {
        throw VersionError("checkpoint version " + std::to_string(version) + " is not supported");
    }
    const auto dim = r.uint<std::uint32_t>();
    const auto classes = r.uint<std::uint32_t>();

    EngineState state;
    for (std::uint32_t c = 0; c < classes; ++c) {
        ClassStatistics s;
        s.class_id = r.uint<std::uint32_t>();
        s.count = r.uint<std::uint64_t>();
        s.prototype.resize(dim);
        s.sq_expectation.resize(dim);
        for (auto& v : s.prototype) v = finite_or_throw(r.f64(), "checkpoint prototype");
        for (auto& v : s.sq_expectation) v = finite_or_throw(r.f64(), "checkpoint squared expectation");
        state.store.restore(std::move(s));
    }
    std::vector<Label> labels(classes);
    for (auto& l : labels) {
        l = r.uint<std::uint32_t>();
    }
    std::vector<double> weights(static_cast<std::size_t>(classes) * dim);
    for (auto& v : weights) {
        v = finite_or_throw(r.f64(), "checkpoint weights");
    }
    state.head = LinearHead(dim, std::move(labels), std::move(weights));

    const auto report_len = r.uint<std::uint64_t>();
    if (report_len > r.remaining()) {
        throw TruncatedError("checkpoint report section is truncated");
    }
    const std::string report_json = r.raw(report_len);
    if (r.remaining() != 0) {
        throw FormatError("checkpoint has " + std::to_string(r.remaining()) + " trailing bytes");
    }
    try {
        state.report = run_report_from_json(nlohmann::json::parse(report_json));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("checkpoint report is not valid JSON: ") + e.what());
    }
    const auto seen = state.store.seen_classes();
    if (!std::equal(seen.begin(), seen.end(), state.head.labels().begin(), state.head.labels().end())) {
        throw FormatError("checkpoint statistics and classifier cover different classes");
    }
    return state;
}

void save_checkpoint(const std::filesystem::path& path, const StatisticsStore& store, const LinearHead& head,
                     const RunReport& report) {
    write_file(path, encode_checkpoint(store, head, report));
}

EngineState load_checkpoint(const std::filesystem::path& path) {
    return decode_checkpoint(read_file(path));
}

CheckpointAudit audit_checkpoint(const Bytes& bytes) {
    // Decoding validates every section; the counts below are then exact.
    const EngineState state = decode_checkpoint(bytes);
    CheckpointAudit a;
    a.dim = state.store.empty() ? state.head.dim() : state.store.dim();
    a.classes = state.store.class_count();
    for (const auto& [_, s] : state.store.classes()) {
        a.statistic_vectors += (s.prototype.empty() ? 0 : 1) + (s.sq_expectation.empty() ? 0 : 1);
        a.counters += 1;
    }
    a.head_rows = state.head.class_count();
    a.report_bytes = to_json(state.report).dump().size();
    a.total_bytes = bytes.size();
    a.accounted_bytes = 16 + a.classes * (4 + 8 + 16 * a.dim) + a.head_rows * (4 + 8 * a.dim) + 8 + a.report_bytes;
    return a;
}

void SyntheticSpec::validate() const {
    if (class_count == 0 || dim == 0 || train_per_class == 0 || test_per_class == 0) {
        throw InvalidArgument("synthetic spec counts must be positive");
    }
    if (!(std_min > 0.0) || !(std_max >= std_min)) {
        throw InvalidArgument("synthetic spec needs 0 < std_min <= std_max");
    }
    if (!(mean_scale >= 0.0) || !(common_scale >= 0.0) || !(direction_scale >= 0.0)) {
        throw InvalidArgument("synthetic spec scales must be nonnegative");
    }
}

SyntheticModel synthetic_model(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng = make_rng(spec.seed, "synthetic-model");
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> jitter(0.8, 1.2);

    std::vector<double> profile(spec.dim);
    for (std::size_t i = 0; i < spec.dim; ++i) {
        const double t = spec.dim == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(spec.dim - 1);
        profile[i] = spec.std_min * std::pow(spec.std_max / spec.std_min, t);
    }

    std::vector<double> common(spec.dim);
    for (double& v : common) v = spec.common_scale * std::abs(normal(rng));

    SyntheticModel m;
    for (std::size_t c = 0; c < spec.class_count; ++c) {
        std::vector<double> mean(spec.dim);
        for (std::size_t i = 0; i < spec.dim; ++i) mean[i] = common[i] + spec.mean_scale * normal(rng);
        m.means.push_back(std::move(mean));

        std::vector<double> std = profile;
        if (spec.profile == StdProfile::permuted) {
            std::shuffle(std.begin(), std.end(), rng);
        } else {
            const double s = jitter(rng);
            for (double& v : std) v *= s;
        }
        m.stds.push_back(std::move(std));
        m.class_scales.push_back(spec.direction_scale * jitter(rng));
    }
    for (std::size_t k = 0; k < spec.shared_directions; ++k) {
        std::vector<double> d(spec.dim);
        for (double& v : d) v = normal(rng);
        const double norm = std::sqrt(std::inner_product(d.begin(), d.end(), d.begin(), 0.0));
        for (double& v : d) v /= norm;
        m.directions.push_back(std::move(d));
    }
    return m;
}

namespace {

FeatureSet draw_split(const SyntheticSpec& spec, const SyntheticModel& m, std::size_t per_class, Rng rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    FeatureSet out(spec.dim);
    out.labels.reserve(per_class * spec.class_count);
    out.values.reserve(per_class * spec.class_count * spec.dim);
    std::vector<double> x(spec.dim);
    for (std::size_t c = 0; c < spec.class_count; ++c) {
        for (std::size_t n = 0; n < per_class; ++n) {
            for (std::size_t i = 0; i < spec.dim; ++i) {
                x[i] = m.means[c][i] + normal(rng) * m.stds[c][i];
            }
            for (const auto& dir : m.directions) {
                const double z = normal(rng) * m.class_scales[c];
                for (std::size_t i = 0; i < spec.dim; ++i) {
                    x[i] += z * dir[i];
                }
            }
            // Stored at dump precision so a write/read round trip is exact.
            for (double& v : x) v = static_cast<float>(v);
            out.push_back(static_cast<Label>(c), x);
        }
    }
    return out;
}

} // namespace

std::pair<FeatureSet, FeatureSet> generate_synthetic(const SyntheticSpec& spec) {
    const SyntheticModel m = synthetic_model(spec);
    return {draw_split(spec, m, spec.train_per_class, make_rng(spec.seed, "synthetic-train")),
            draw_split(spec, m, spec.test_per_class, make_rng(spec.seed, "synthetic-test"))};
}

nlohmann::ordered_json to_json(const SyntheticSpec& s) {
    return {
        {"version", 1},
        {"class_count", s.class_count},
        {"dim", s.dim},
        {"train_per_class", s.train_per_class},
        {"test_per_class", s.test_per_class},
        {"mean_scale", s.mean_scale},
        {"common_scale", s.common_scale},
        {"std_min", s.std_min},
        {"std_max", s.std_max},
        {"std_profile", s.profile == StdProfile::permuted ? "permuted" : "shared"},
        {"shared_directions", s.shared_directions},
        {"direction_scale", s.direction_scale},
        {"seed", s.seed},
    };
}

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
    SyntheticSpec s;
    try {
        if (j.value("version", 1) != 1) {
            throw InvalidArgument("unsupported synthetic spec version");
        }
        s.class_count = j.value("class_count", s.class_count);
        s.dim = j.value("dim", s.dim);
        s.train_per_class = j.value("train_per_class", s.train_per_class);
        s.test_per_class = j.value("test_per_class", s.test_per_class);
        s.mean_scale = j.value("mean_scale", s.mean_scale);
        s.common_scale = j.value("common_scale", s.common_scale);
        s.std_min = j.value("std_min", s.std_min);
        s.std_max = j.value("std_max", s.std_max);
        const std::string profile = j.value("std_profile", std::string("permuted"));
        if (profile == "permuted") {
            s.profile = StdProfile::permuted;
        } else if (profile == "shared") {
            s.profile = StdProfile::shared;
        } else {
            throw InvalidArgument("std_profile must be 'permuted' or 'shared'");
        }
        s.shared_directions = j.value("shared_directions", s.shared_directions);
        s.direction_scale = j.value("direction_scale", s.direction_scale);
        s.seed = j.value("seed", s.seed);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed synthetic spec: ") + e.what());
    }
    s.validate();
    return s;
}

} // namespace otfcl

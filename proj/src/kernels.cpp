#include "otfcl/kernels.hpp"

#include "otfcl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace otfcl::kernels {

namespace {

std::vector<std::size_t> target_rows(const LinearHead& head, std::span<const LabeledFeature> samples) {
    std::vector<std::size_t> rows(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        if (samples[s].feature.size() != head.dim()) {
            throw DimensionError("training feature has " + std::to_string(samples[s].feature.size()) +
                                 " components, head expects " + std::to_string(head.dim()));
        }
        const auto row = head.index_of(samples[s].label);
        if (!row) {
            throw NotFoundError("class " + std::to_string(samples[s].label) + " is not in the classifier");
        }
        rows[s] = *row;
    }
    return rows;
}

// softmax - onehot into `coef`; returns the CE loss. Shared by both variants.
double sample_coefficients(const LinearHead& head, std::span<const double> f, std::size_t target,
                           std::span<double> coef) {
    const std::size_t n = head.class_count();
    const std::size_t d = head.dim();
    const double* w = head.weights().data();
    for (std::size_t c = 0; c < n; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            acc += w[c * d + i] * f[i];
        }
        coef[c] = acc;
    }
    const double m = *std::max_element(coef.begin(), coef.end());
    double total = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        total += std::exp(coef[c] - m);
    }
    const double loss = (m + std::log(total)) - coef[target];
    for (std::size_t c = 0; c < n; ++c) {
        coef[c] = std::exp(coef[c] - m) / total;
    }
    coef[target] -= 1.0;
    return loss;
}

bool predicted_correctly(const LinearHead& head, const IsayModel* isay, std::span<const double> f, Label truth,
                         std::vector<double>& scores, std::vector<double>& tau) {
    const std::size_t n = head.class_count();
    const std::size_t d = head.dim();
    const double* w = head.weights().data();
    for (std::size_t c = 0; c < n; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            acc += w[c * d + i] * f[i];
        }
        scores[c] = acc;
    }
    softmax_inplace(scores);
    if (isay != nullptr) {
        isay->importance(f, tau);
        for (std::size_t c = 0; c < n; ++c) {
            scores[c] += tau[c];
        }
    }
    return head.labels()[argmax_first(scores)] == truth;
}

void check_eval_inputs(const LinearHead& head, const IsayModel* isay, const FeatureSet& test,
                       std::span<const std::size_t> indices) {
    if (head.class_count() == 0) {
        throw InvalidState("classifier has no classes");
    }
    if (test.dim != head.dim()) {
        throw DimensionError("test features have " + std::to_string(test.dim) + " components, head expects " +
                             std::to_string(head.dim()));
    }
    if (isay != nullptr && !std::equal(isay->labels().begin(), isay->labels().end(), head.labels().begin(),
                                       head.labels().end())) {
        throw InvalidState("importance model and classifier cover different classes");
    }
    for (std::size_t idx : indices) {
        if (idx >= test.size()) {
            throw InvalidArgument("test index out of range");
        }
    }
}

} // namespace

int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double accumulate_ce_gradient(const LinearHead& head, std::span<const LabeledFeature> samples,
                              std::span<double> grad) {
    const std::vector<std::size_t> rows = target_rows(head, samples);
    const std::size_t n = head.class_count();
    const std::size_t d = head.dim();
    const auto count = static_cast<std::ptrdiff_t>(samples.size());
    std::vector<double> coef(samples.size() * n);
    std::vector<double> losses(samples.size());

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < count; ++s) {
        const auto k = static_cast<std::size_t>(s);
        losses[k] = sample_coefficients(head, samples[k].feature, rows[k], {coef.data() + k * n, n});
    }

    // Rows are independent; within a row samples are added in stream order so
    // the result matches the serial reference exactly.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n); ++c) {
        const auto row = static_cast<std::size_t>(c);
        double* g = grad.data() + row * d;
        for (std::size_t s = 0; s < samples.size(); ++s) {
            const double a = coef[s * n + row];
            const auto f = samples[s].feature;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] += a * f[i];
            }
        }
    }

    double loss = 0.0;
    for (double l : losses) {
        loss += l;
    }
    return loss;
}

std::size_t count_correct(const LinearHead& head, const IsayModel* isay, const FeatureSet& test,
                          std::span<const std::size_t> indices) {
    check_eval_inputs(head, isay, test, indices);
    const auto count = static_cast<std::ptrdiff_t>(indices.size());
    std::size_t correct = 0;
#pragma omp parallel reduction(+ : correct)
    {
        std::vector<double> scores(head.class_count());
        std::vector<double> tau(head.class_count());
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < count; ++k) {
            const std::size_t idx = indices[static_cast<std::size_t>(k)];
            if (predicted_correctly(head, isay, test.row(idx), test.labels[idx], scores, tau)) {
                ++correct;
            }
        }
    }
    return correct;
}

void batch_distances(const IsayModel& isay, const FeatureSet& features, std::span<double> out) {
    const std::size_t n = isay.labels().size();
    if (features.dim != isay.dim() || out.size() != features.size() * n) {
        throw DimensionError("batch distance shapes do not agree");
    }
    const auto rows = static_cast<std::ptrdiff_t>(features.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        const auto k = static_cast<std::size_t>(r);
        isay.distances(features.row(k), out.subspan(k * n, n));
    }
}

namespace serial {

double accumulate_ce_gradient(const LinearHead& head, std::span<const LabeledFeature> samples,
                              std::span<double> grad) {
    const std::vector<std::size_t> rows = target_rows(head, samples);
    const std::size_t n = head.class_count();
    const std::size_t d = head.dim();
    std::vector<double> coef(n);
    double loss = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        loss += sample_coefficients(head, samples[s].feature, rows[s], coef);
        const auto f = samples[s].feature;
        for (std::size_t c = 0; c < n; ++c) {
            for (std::size_t i = 0; i < d; ++i) {
                grad[c * d + i] += coef[c] * f[i];
            }
        }
    }
    return loss;
}

std::size_t count_correct(const LinearHead& head, const IsayModel* isay, const FeatureSet& test,
                          std::span<const std::size_t> indices) {
    check_eval_inputs(head, isay, test, indices);
    std::vector<double> scores(head.class_count());
    std::vector<double> tau(head.class_count());
    std::size_t correct = 0;
    for (std::size_t idx : indices) {
        if (predicted_correctly(head, isay, test.row(idx), test.labels[idx], scores, tau)) {
            ++correct;
        }
    }
    return correct;
}

void batch_distances(const IsayModel& isay, const FeatureSet& features, std::span<double> out) {
    const std::size_t n = isay.labels().size();
    if (features.dim != isay.dim() || out.size() != features.size() * n) {
        throw DimensionError("batch distance shapes do not agree");
    }
    for (std::size_t k = 0; k < features.size(); ++k) {
        isay.distances(features.row(k), out.subspan(k * n, n));
    }
}

} // namespace serial

} // namespace otfcl::kernels

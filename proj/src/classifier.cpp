#include "otfcl/classifier.hpp"

#include "otfcl/errors.hpp"
#include "otfcl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace otfcl {

void OptimizerConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw InvalidArgument("optimizer.learning_rate must be positive");
    }
    if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
        throw InvalidArgument("optimizer.weight_decay must be nonnegative");
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw InvalidArgument("optimizer.beta must be nonnegative");
    }
}

LinearHead::LinearHead(std::size_t dim, std::vector<Label> labels, std::vector<double> weights)
    : dim_(dim), labels_(std::move(labels)), weights_(std::move(weights)) {
    if (weights_.size() != labels_.size() * dim_) {
        throw DimensionError("head weights do not match labels x dim");
    }
    if (std::adjacent_find(labels_.begin(), labels_.end(), std::greater_equal<>()) != labels_.end()) {
        throw InvalidArgument("head labels must be strictly ascending");
    }
    for (double w : weights_) {
        if (!std::isfinite(w)) {
            throw InvalidArgument("head weights must be finite");
        }
    }
}

std::optional<std::size_t> LinearHead::index_of(Label label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

void LinearHead::expand_classes(std::span<const Label> new_labels) {
    std::vector<Label> incoming(new_labels.begin(), new_labels.end());
    std::sort(incoming.begin(), incoming.end());
    if (std::adjacent_find(incoming.begin(), incoming.end()) != incoming.end()) {
        throw InvalidArgument("duplicate label in expansion request");
    }
    for (Label l : incoming) {
        if (index_of(l)) {
            throw InvalidArgument("class " + std::to_string(l) + " already has a row");
        }
    }
    for (Label l : incoming) {
        auto pos = std::lower_bound(labels_.begin(), labels_.end(), l);
        const auto row = static_cast<std::ptrdiff_t>(pos - labels_.begin());
        labels_.insert(pos, l);
        weights_.insert(weights_.begin() + row * static_cast<std::ptrdiff_t>(dim_), dim_, 0.0);
    }
}

std::vector<double> logits(const LinearHead& head, std::span<const double> feature) {
    if (feature.size() != head.dim()) {
        throw DimensionError("feature has " + std::to_string(feature.size()) + " components, head expects " +
                             std::to_string(head.dim()));
    }
    std::vector<double> z(head.class_count());
    for (std::size_t c = 0; c < z.size(); ++c) {
        const auto w = head.row(c);
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            acc += w[i] * feature[i];
        }
        z[c] = acc;
    }
    return z;
}

void softmax_inplace(std::span<double> x) {
    const double m = *std::max_element(x.begin(), x.end());
    double total = 0.0;
    for (double& v : x) {
        v = std::exp(v - m);
        total += v;
    }
    for (double& v : x) {
        v /= total;
    }
}

std::vector<double> logits_softmax(const LinearHead& head, std::span<const double> feature) {
    if (head.class_count() == 0) {
        throw InvalidState("classifier has no classes");
    }
    std::vector<double> z = logits(head, feature);
    softmax_inplace(z);
    return z;
}

LossAndGrad ce_loss_and_grad(const LinearHead& head, std::span<const double> feature, Label label) {
    const auto target = head.index_of(label);
    if (!target) {
        throw NotFoundError("class " + std::to_string(label) + " is not in the classifier");
    }
    std::vector<double> z = logits(head, feature);
    const double m = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double v : z) {
        total += std::exp(v - m);
    }
    LossAndGrad out;
    // log-sum-exp form stays finite for confident logits.
    out.loss = (m + std::log(total)) - z[*target];
    out.grad.resize(head.class_count() * head.dim());
    for (std::size_t c = 0; c < z.size(); ++c) {
        const double coef = std::exp(z[c] - m) / total - (c == *target ? 1.0 : 0.0);
        for (std::size_t i = 0; i < head.dim(); ++i) {
            out.grad[c * head.dim() + i] = coef * feature[i];
        }
    }
    return out;
}

StepResult sgd_batch_step(LinearHead& head, std::span<const LabeledFeature> real,
                          std::span<const LabeledFeature> pseudo, const OptimizerConfig& config) {
    StepResult result;
    if (real.empty()) {
        return result;
    }
    const std::size_t n = head.class_count() * head.dim();
    std::vector<double> real_grad(n, 0.0);
    result.real_loss = kernels::accumulate_ce_gradient(head, real, real_grad) / static_cast<double>(real.size());

    std::vector<double> pseudo_grad;
    if (!pseudo.empty() && config.beta != 0.0) {
        pseudo_grad.assign(n, 0.0);
        result.pseudo_loss =
            kernels::accumulate_ce_gradient(head, pseudo, pseudo_grad) / static_cast<double>(pseudo.size());
    }

    const double inv_real = 1.0 / static_cast<double>(real.size());
    const double pseudo_scale = pseudo_grad.empty() ? 0.0 : config.beta / static_cast<double>(pseudo.size());
    auto w = head.weights();
    for (std::size_t k = 0; k < n; ++k) {
        double g = real_grad[k] * inv_real;
        if (!pseudo_grad.empty()) {
            g += pseudo_scale * pseudo_grad[k];
        }
        w[k] -= config.learning_rate * (g + config.weight_decay * w[k]);
    }
    result.applied = true;
    return result;
}

std::size_t argmax_first(std::span<const double> scores) {
    return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

Prediction predict(const LinearHead& head, std::span<const double> feature, std::span<const double> tau) {
    if (tau.size() != head.class_count()) {
        throw DimensionError("importance vector has " + std::to_string(tau.size()) + " entries for " +
                             std::to_string(head.class_count()) + " classes");
    }
    Prediction p;
    p.scores = logits_softmax(head, feature);
    for (std::size_t c = 0; c < tau.size(); ++c) {
        p.scores[c] += tau[c];
    }
    p.index = argmax_first(p.scores);
    p.label = head.labels()[p.index];
    return p;
}

Prediction predict(const LinearHead& head, std::span<const double> feature) {
    Prediction p;
    p.scores = logits_softmax(head, feature);
    p.index = argmax_first(p.scores);
    p.label = head.labels()[p.index];
    return p;
}

} // namespace otfcl

#pragma once

#include "otfcl/types.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace otfcl {

struct OptimizerConfig {
    double learning_rate = 0.02;
    double weight_decay = 5e-5;
    double beta = 2.0; // weight of the pseudo-feature loss

    void validate() const;

    friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

/// Bias-free linear classifier over the classes seen so far. Rows are kept in
/// ascending label order, matching StatisticsStore::seen_classes().
class LinearHead {
public:
    LinearHead() = default;
    explicit LinearHead(std::size_t dim) : dim_(dim) {}

    /// Rebuild from serialized parts. `labels` must be strictly ascending.
    LinearHead(std::size_t dim, std::vector<Label> labels, std::vector<double> weights);

    std::size_t dim() const { return dim_; }
    std::size_t class_count() const { return labels_.size(); }
    std::span<const Label> labels() const { return labels_; }
    std::optional<std::size_t> index_of(Label label) const;

    std::span<const double> weights() const { return weights_; }
    std::span<double> weights() { return weights_; }
    std::span<const double> row(std::size_t i) const { return {weights_.data() + i * dim_, dim_}; }

    /// Insert zero rows for `new_labels` at their sorted positions. Existing
    /// rows are untouched, so old-class logits do not change.
    void expand_classes(std::span<const Label> new_labels);

    friend bool operator==(const LinearHead&, const LinearHead&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<Label> labels_;
    std::vector<double> weights_;
};

std::vector<double> logits(const LinearHead& head, std::span<const double> feature);

/// Max-subtracted softmax of `x`, written in place.
void softmax_inplace(std::span<double> x);

std::vector<double> logits_softmax(const LinearHead& head, std::span<const double> feature);

struct LossAndGrad {
    double loss = 0.0;
    std::vector<double> grad; // N x D, row-major
};

/// Cross-entropy -log softmax_label and its gradient (softmax - onehot) x f.
LossAndGrad ce_loss_and_grad(const LinearHead& head, std::span<const double> feature, Label label);

struct LabeledFeature {
    std::span<const double> feature;
    Label label = 0;
};

struct StepResult {
    bool applied = false;     // false when the real list was empty
    double real_loss = 0.0;   // mean CE over real samples, before the update
    double pseudo_loss = 0.0; // mean CE over pseudo samples, before the update
};

/// One SGD step on mean(real CE) + beta * mean(pseudo CE), with coupled L2:
/// w <- w - lr * (grad + weight_decay * w).
StepResult sgd_batch_step(LinearHead& head, std::span<const LabeledFeature> real,
                          std::span<const LabeledFeature> pseudo, const OptimizerConfig& config);

struct Prediction {
    Label label = 0;
    std::size_t index = 0;
    std::vector<double> scores;
};

/// scores = softmax(W f) + tau; argmax with ties going to the lowest index.
Prediction predict(const LinearHead& head, std::span<const double> feature, std::span<const double> tau);

/// Plain softmax argmax, used when the importance correction is disabled.
Prediction predict(const LinearHead& head, std::span<const double> feature);

std::size_t argmax_first(std::span<const double> scores);

} // namespace otfcl

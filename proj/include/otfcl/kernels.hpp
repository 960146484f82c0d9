#pragma once

// Data-parallel inner loops of the engine. Each kernel has an OpenMP version
// (used by the engine) and a serial reference with the same summation order;
// the two must agree bit for bit.

#include "otfcl/classifier.hpp"
#include "otfcl/isay.hpp"
#include "otfcl/types.hpp"

#include <cstddef>
#include <span>

namespace otfcl::kernels {

/// Adds sum_s (softmax(W f_s) - onehot(y_s)) x f_s into `grad` (N x D) and
/// returns sum_s CE_s.
double accumulate_ce_gradient(const LinearHead& head, std::span<const LabeledFeature> samples,
                              std::span<double> grad);

/// Number of `indices` rows of `test` predicted correctly. `isay` may be null.
std::size_t count_correct(const LinearHead& head, const IsayModel* isay, const FeatureSet& test,
                          std::span<const std::size_t> indices);

/// gamma for every row of `features`; output is rows x N.
void batch_distances(const IsayModel& isay, const FeatureSet& features, std::span<double> out);

int max_threads();

namespace serial {

double accumulate_ce_gradient(const LinearHead& head, std::span<const LabeledFeature> samples,
                              std::span<double> grad);

std::size_t count_correct(const LinearHead& head, const IsayModel* isay, const FeatureSet& test,
                          std::span<const std::size_t> indices);

void batch_distances(const IsayModel& isay, const FeatureSet& features, std::span<double> out);

} // namespace serial

} // namespace otfcl::kernels
